import sys

from channel_purity.cli import main

if __name__ == '__main__':
    sys.exit(main())
