import sys

from agentlab.evaluation.cli import main

sys.exit(main())
