import sys

from oscillator_purity.cli import main

sys.exit(main())
