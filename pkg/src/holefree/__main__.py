import sys

from holefree.cli import main

sys.exit(main())
