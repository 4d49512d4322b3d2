"""Command-line entry point for the monotone duality toolkit."""
import argparse
import importlib
import logging
import sys
from typing import Callable, List, Optional

from config import config
from errors import FixtureError, UsageError
from fixtures import registry

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

EXTENSIONS = ("commands.list", "commands.verify", "commands.run", "commands.fixtures")

Handler = Callable[[argparse.Namespace], int]


class DualityCLI:
    """Argument parser whose subcommands are registered by command modules."""

    def __init__(self):
        self.parser = argparse.ArgumentParser(
            prog="duality",
            description="Attouch-Thera duality checks and splitting experiments on operator fixtures",
        )
        self.subparsers = self.parser.add_subparsers(dest="command", required=True)
        self.extensions: List[str] = []

    def add_command(self, name: str, help: str, handler: Handler) -> argparse.ArgumentParser:
        sub = self.subparsers.add_parser(name, help=help, description=help)
        sub.set_defaults(handler=handler)
        return sub

    def load_extension(self, name: str):
        module = importlib.import_module(name)
        module.setup(self)
        self.extensions.append(name)
        logger.debug(f"Loaded extension {name}")

    def setup_hook(self):
        """Load command modules and the configured fixture overlay."""
        for name in EXTENSIONS:
            self.load_extension(name)
        if config.FIXTURE_OVERLAY:
            names = registry.load_overlay(config.FIXTURE_OVERLAY)
            logger.info(f"Overlay {config.FIXTURE_OVERLAY} added fixtures: {', '.join(names)}")

    def run(self, argv: Optional[List[str]] = None) -> int:
        try:
            self.setup_hook()
            args = self.parser.parse_args(argv)
            return args.handler(args)
        except (UsageError, FixtureError) as e:
            logger.error(f"Usage error: {e}")
            print(f"❌ {e}", file=sys.stderr)
            return EXIT_USAGE
        except Exception as e:
            logger.error(f"Command failed: {e}", exc_info=True)
            print(f"❌ {e}", file=sys.stderr)
            return EXIT_FAILED


def main():
    logging.basicConfig(
        level=getattr(logging, config.LOG_LEVEL, logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    sys.exit(DualityCLI().run())


if __name__ == "__main__":
    main()
