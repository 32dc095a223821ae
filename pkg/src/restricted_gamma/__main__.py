"""Main entry point for restricted-gamma."""

from .cli import main

if __name__ == "__main__":
    main()
