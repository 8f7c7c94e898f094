"""Run the mfa command line: ``python -m mfa``."""
from .cli import main

if __name__ == "__main__":
    main()
