import sys

from omegalab.routes import main

if __name__ == "__main__":
    sys.exit(main())
