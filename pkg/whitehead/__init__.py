"""
Whitehead poset and pure symmetric automorphism cohomology toolkit.
"""
__version__ = "1.0.0"
