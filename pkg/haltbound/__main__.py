import sys

from haltbound.cli import main

sys.exit(main())
