import sys

from agentclient.cli import main

sys.exit(main())
