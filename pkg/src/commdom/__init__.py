"""Commuting graphs of finite groups and their (total) domination numbers."""

__version__ = "0.1.0"
