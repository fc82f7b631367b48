"""Allow ``python -m rank_forge`` as an alias for the console script."""

import sys

from rank_forge.cli import main

if __name__ == "__main__":
    sys.exit(main())
