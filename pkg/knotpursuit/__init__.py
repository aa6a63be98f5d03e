"""Vanishing polynomials fitted jointly with data knots."""

__version__ = "1.0.0"
