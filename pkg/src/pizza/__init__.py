"""Pizza quantities of hyperplane arrangements.

Alternating volume sums of a body over the chambers of a central hyperplane
arrangement, with Monte Carlo, exact planar and closed-form engines plus
verification suites.
"""
__version__ = "0.1.0"
