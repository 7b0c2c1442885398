"""
Application utilities - diagnostics helpers
"""
