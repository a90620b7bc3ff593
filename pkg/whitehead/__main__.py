"""
Module entry point: python -m whitehead
"""
import sys

from whitehead.cli import run

if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
