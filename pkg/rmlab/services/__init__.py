"""Service layer: field arithmetic, codes, linear sets and the bridge between them."""
