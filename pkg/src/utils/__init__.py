"""
Parsers for system files, corpus indexes and query points.
"""
