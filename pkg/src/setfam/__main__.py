import sys

from setfam.cli import main

sys.exit(main())
