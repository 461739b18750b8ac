"""Allow ``python -m setfermat``."""

import sys

from .cli import main

sys.exit(main())
