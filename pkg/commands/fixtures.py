"""Fixtures command: load a declarative overlay of user fixtures."""
import logging

from fixtures import registry

logger = logging.getLogger(__name__)


class FixturesCommand:

    def __init__(self, cli):
        self.cli = cli
        parser = cli.add_command("fixtures", "Load and validate an overlay fixture file", self.handle)
        parser.add_argument("--load", required=True, help="JSON overlay file")

    def handle(self, args) -> int:
        names = registry.load_overlay(args.load)
        for name in names:
            print(f"✅ {name} loaded and validated")
        return 0


def setup(cli):
    """Register the fixtures command."""
    FixturesCommand(cli)
