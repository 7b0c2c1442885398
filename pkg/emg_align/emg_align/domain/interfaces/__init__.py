"""
Domain interfaces - abstractions for external dependencies
"""
