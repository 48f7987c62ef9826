"""Module entry point: python -m nhfloquet ..."""

from .cli import entry

if __name__ == "__main__":
    entry()
