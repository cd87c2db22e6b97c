"""
Test modules for trichain.
"""
