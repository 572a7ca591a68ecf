"""
version of the twomode package
"""

__version__ = "1.0.0"
