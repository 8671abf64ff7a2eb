"""``python -m distalreg``."""
import sys

from .cli import main

sys.exit(main())
