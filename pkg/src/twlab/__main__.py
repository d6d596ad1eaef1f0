import sys

from twlab.cli import main

sys.exit(main())
