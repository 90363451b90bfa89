"""Allow `python -m garchmcmc` as an alias for the garch-mcmc script."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
