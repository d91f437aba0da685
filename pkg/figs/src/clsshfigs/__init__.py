"""Figure renderers for the lattice toolkit's CSV/JSON output files.

This package reads the serialized artifacts only; it never imports the
simulation library. Every renderer validates its inputs against the
expected schema before touching the canvas and raises SchemaError on
any mismatch, so a bad input can never produce an image.
"""

__version__ = "0.1.0"
