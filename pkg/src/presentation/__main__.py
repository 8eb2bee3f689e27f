import sys

from src.presentation.main import main

sys.exit(main())
