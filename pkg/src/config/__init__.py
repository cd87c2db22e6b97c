"""
Configuration management modules.
"""
