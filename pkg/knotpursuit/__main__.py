import sys

from knotpursuit.main import main

sys.exit(main())
