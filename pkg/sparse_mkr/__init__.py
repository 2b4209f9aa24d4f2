"""
Sparse multiple-kernel regression with generalized total-variation penalties.
"""

__version__ = '0.1.0'
