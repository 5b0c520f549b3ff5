"""
Entry point for running qausim as a module.

Usage:
    python -m qausim [command] [options]

Example:
    python -m qausim run dumbbell3 --seed 7
    python -m qausim suite param-sweep --workers 4
    python -m qausim analyze qcn-tau --capacity 10e9 --capacity 100e9
"""

from qausim.cli.main import cli

if __name__ == "__main__":
    cli()
