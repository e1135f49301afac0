"""Allows `python -m commentlens`."""

import sys

from .cli import main

sys.exit(main())
