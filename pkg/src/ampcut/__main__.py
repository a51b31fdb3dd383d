import sys

from ampcut.cli import main

sys.exit(main())
