import sys

from reviewgraph.cli import main

sys.exit(main())
