"""Random eigenvalues of dual infinite (p,q)-nanotubes."""

__version__ = "0.1.0"
