"""Allow ``python -m floatberg``."""
import sys

from .cli import main

sys.exit(main())
