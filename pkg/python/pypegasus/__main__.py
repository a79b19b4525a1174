import sys

from pypegasus.cli import main

sys.exit(main())
