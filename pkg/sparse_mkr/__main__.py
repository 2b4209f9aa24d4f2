import sys

from sparse_mkr.cli.main import main

sys.exit(main())
