import sys

from drivebench.harness.cli import main

sys.exit(main())
