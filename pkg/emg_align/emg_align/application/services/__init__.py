"""
Application services - one module per pipeline stage
"""
