"""Fixed subgroups of automorphisms of free groups and the product-of-powers witness."""

__version__ = "0.1.0"
