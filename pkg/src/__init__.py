"""
trichain: multiplicities of zero-dimensional regular chains.
"""

__version__ = '1.0.0'
