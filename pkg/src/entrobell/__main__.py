"""Module entry point: ``python -m entrobell``."""

import sys

from .cli import main

sys.exit(main())
