"""Unit tests for the qausim packages."""
