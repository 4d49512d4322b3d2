"""Run command: drive a splitting algorithm on a fixture."""
import logging

from commands import parse_vector
from config import config
from experiments import RunAlgorithm, run_algorithm

logger = logging.getLogger(__name__)


class RunCommand:

    def __init__(self, cli):
        self.cli = cli
        parser = cli.add_command("run", "Run a splitting algorithm on a fixture", self.handle)
        parser.add_argument("--fixture", required=True, help="Fixture name (see `list`)")
        parser.add_argument("--algorithm", required=True,
                            help=f"One of: {', '.join(a.value for a in RunAlgorithm)}")
        parser.add_argument("--x0", help="Starting point, e.g. 5 or -1,2")
        parser.add_argument("--anchor", help="Anchor y of Halpern and Haugazeau")
        parser.add_argument("--lambda", dest="relaxation", type=float, help="Relaxation of pr_averaged")
        parser.add_argument("--tol", type=float, default=config.ITERATION_TOL, help="Stopping tolerance")
        parser.add_argument("--max-iter", dest="max_iter", type=int, default=config.MAX_ITER,
                            help="Iteration budget")
        parser.add_argument("--csv", dest="csv_path", help="Write the iteration trace CSV here")
        parser.add_argument("--json", dest="json_path", help="Write the report JSON here")

    def handle(self, args) -> int:
        report, trace = run_algorithm(
            args.fixture,
            args.algorithm,
            x0=parse_vector(args.x0),
            anchor=parse_vector(args.anchor),
            relaxation=args.relaxation,
            tol=args.tol,
            max_iter=args.max_iter,
            csv_path=args.csv_path,
            json_path=args.json_path,
        )
        status = "converged" if trace.converged else "did not converge"
        print(f"🔁 {trace.algorithm.value} {status} after {trace.iterations_used} iterations")
        print(f"   limit  = {', '.join(format(v, '.17g') for v in trace.limit)}")
        print(f"   shadow = {', '.join(format(v, '.17g') for v in trace.shadow_limit)}")
        for check in sorted(report.checks, key=lambda c: c.name):
            mark = "✅" if check.passed else "❌"
            print(f"{mark} {check.name}: residual {check.residual:.3e} <= {check.tolerance:.1e}")
        return 0 if report.passed else 1


def setup(cli):
    """Register the run command."""
    RunCommand(cli)
