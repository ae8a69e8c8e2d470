"""Run the lab as ``python -m sinai_lab``."""
import sys

from .cli import main

sys.exit(main())
