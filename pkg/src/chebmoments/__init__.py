"""Moments of the Chebotarev error term: groups, conductors, zeros, prime sums."""

__version__ = "0.1.0"
