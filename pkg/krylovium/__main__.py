import sys

from krylovium.cli import main

sys.exit(main())
