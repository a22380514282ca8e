import sys

from simplex_ldpc.cli import main

sys.exit(main())
