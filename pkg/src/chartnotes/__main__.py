#!/usr/bin/env python
"""Main entry point for chartnotes."""

from chartnotes.cli import cli

if __name__ == "__main__":
    cli()
