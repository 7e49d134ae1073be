import sys

from wardsurf.cli import main

sys.exit(main())
