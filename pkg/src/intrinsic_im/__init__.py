"""Influence maximization with intrinsic and influenced node activation."""

__version__ = "0.1.0"
