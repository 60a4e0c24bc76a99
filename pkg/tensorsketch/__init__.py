"""
tensorsketch - randomized tensor sparsification and sketched HOSVD.

Keeps large entries, samples moderate entries proportionally to their
squares and small entries uniformly, and estimates higher-order singular
subspaces from the resulting sparse sketches.
"""

__version__ = "1.0.0"
__author__ = "tensorsketch developers"
