"""weaklab: a desk-scale laboratory for weak-label audio tagging experiments."""

__version__ = "0.1.0"
