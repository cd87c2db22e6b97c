"""
Exact algebra: arithmetic, regular chains, decompositions, isolation and the dual space oracle.
"""
