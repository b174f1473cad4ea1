import os
import sys

# Allow running from a checkout without installing
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from courantkit.cli import main


if __name__ == "__main__":
    sys.exit(main())
