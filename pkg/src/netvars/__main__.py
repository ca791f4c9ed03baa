import sys

from netvars.cli import main

sys.exit(main())
