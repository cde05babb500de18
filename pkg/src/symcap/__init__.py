"""Capacities of toric domains and Lagrangian products, Mahler volumes of
product-algebra convex bodies, and brute-force oracles to check them."""

__version__ = "0.1.0"
