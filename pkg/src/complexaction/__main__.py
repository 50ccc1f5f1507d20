import sys

from complexaction.cli import main

sys.exit(main())
