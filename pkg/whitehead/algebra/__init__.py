"""
Algebra package.
Exact integer matrices, chain complexes, the presentation of ΣPAut and the
degree-2 ring data.
"""
