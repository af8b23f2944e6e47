"""folab: exact density/extension combinatorics, bounded first-order model
checking, a vertex-picking game engine, and seeded Monte Carlo experiments
on the random graph G(n, n^-alpha)."""

__version__ = "0.1.0"
