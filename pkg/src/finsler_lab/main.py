"""finsler-lab command-line entrypoint."""

import logging
import sys

from finsler_lab.cli import run_command
from finsler_lab.config import settings


def main(argv: list[str] | None = None) -> None:
    logging.basicConfig(
        level=settings.log_level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
