"""qausim CLI - run, suite, analyze, validate."""
__version__ = "0.1.0"
