import sys

from grusskit.cli import main

sys.exit(main())
