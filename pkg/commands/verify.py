"""Verify command: run one verification suite on one fixture."""
import logging

from config import config
from reports import store
from suites import Suite, run_suite

logger = logging.getLogger(__name__)


class VerifyCommand:

    def __init__(self, cli):
        self.cli = cli
        parser = cli.add_command("verify", "Run a verification suite on a fixture", self.handle)
        parser.add_argument("--fixture", required=True, help="Fixture name (see `list`)")
        parser.add_argument("--suite", required=True, help=f"One of: {', '.join(s.value for s in Suite)}")
        parser.add_argument("--samples", type=int, default=config.DEFAULT_SAMPLES,
                            help="Random points per check")
        parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED, help="RNG seed")
        parser.add_argument("--json", dest="json_path", help="Write the report JSON here")

    def handle(self, args) -> int:
        report = run_suite(args.fixture, args.suite, args.samples, args.seed)
        for check in sorted(report.checks, key=lambda c: c.name):
            mark = "✅" if check.passed else "❌"
            note = " (expected failure)" if check.expected_failure else ""
            print(f"{mark} {check.name}{note}: residual {check.residual:.3e} <= {check.tolerance:.1e}"
                  f"  [{check.property}]")
        path = store.write_report(report, args.json_path)
        if path:
            print(f"📄 Report written to {path}")
        failed = len(report.failures)
        print(f"{len(report.checks) - failed}/{len(report.checks)} checks passed")
        return 0 if failed == 0 else 1


def setup(cli):
    """Register the verify command."""
    VerifyCommand(cli)
