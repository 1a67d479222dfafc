"""
Console entry point.

    python main.py check stores/example_a.json
    python main.py sweep --max-vertices 4
"""
import sys

from cli import main

if __name__ == "__main__":
    sys.exit(main())
