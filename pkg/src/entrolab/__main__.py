"""Entry point for python -m entrolab."""

import sys

from entrolab.cli.main import run

if __name__ == "__main__":
    sys.exit(run())
