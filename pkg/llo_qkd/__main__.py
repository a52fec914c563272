"""Allow ``python -m llo_qkd``."""

import sys

from llo_qkd.main import main

sys.exit(main())
