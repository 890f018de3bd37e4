import sys

from overhang.cli import main

sys.exit(main())
