"""Provide the entry points of the ``pylivcond_*`` commands."""
