"""Stochastic Kronecker, noisy Kronecker and Chung-Lu graph generators and comparisons."""

__version__ = "0.1.0"
