import sys

from ungd.cli import main

sys.exit(main())
