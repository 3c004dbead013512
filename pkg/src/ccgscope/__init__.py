"""Surface-constituency scope engine: CCG parser, reading extraction, and
a quantifier-permutation baseline for a fixed English fragment."""

__version__ = "0.1.0"
