"""rmlab - exact rank-metric codes, scattered linear sets and the correspondence between them."""

__version__ = "1.0.0"
