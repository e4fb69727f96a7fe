import sys

from wave_cauchy.cli import main

sys.exit(main())
