"""
Configuration file loading
"""
