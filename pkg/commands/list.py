"""List command for viewing registered fixtures."""
import logging

from fixtures import registry

logger = logging.getLogger(__name__)


class ListCommand:
    """Print every fixture with its operators and solution sets."""

    def __init__(self, cli):
        self.cli = cli
        cli.add_command("list", "List registered fixtures", self.handle)

    def handle(self, args) -> int:
        summaries = registry.list_fixtures()
        if not summaries:
            print("📭 No fixtures registered.")
            return 0
        print(f"{len(summaries)} fixtures:")
        for s in summaries:
            flag = "paramonotone" if s["paramonotone"] else "not paramonotone"
            print(f"  {s['name']} (dim {s['dim']}, {flag})")
            print(f"    A = {s['A']}, B = {s['B']}")
            print(f"    Z = {s['Z']}, K = {s['K']}, Fix T = {s['fixT']}")
            print(f"    {s['notes']}")
        logger.info(f"Listed {len(summaries)} fixtures")
        return 0


def setup(cli):
    """Register the list command."""
    ListCommand(cli)
