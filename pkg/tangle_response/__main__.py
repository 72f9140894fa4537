"""
tangle-response entry point.

Usage:
    python -m tangle_response verify
    python -m tangle_response report --alpha 1.5707963 --beta 0.7853982
    tangle-response fig3 --out fig3.csv
    tangle-response serve --port 5001
"""

import sys

from .cli import main as cli_main


def main():
    """Main entry point for tangle-response."""
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
