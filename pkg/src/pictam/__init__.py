"""Finite-instance verification of Segal K-theory groupoids, 2-nerves, and
Picard-Tamsamani structures by exhaustive checking."""

__version__ = "0.1.0"
