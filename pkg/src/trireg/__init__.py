"""Triangle-regular graphs, flip colorings and abelian Cayley graph realizations."""

__version__ = "0.1.0"
