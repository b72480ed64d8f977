"""
Test suite for apg-sets
"""

__version__ = "1.0.0"