"""
Domain entities - core data types of the alignment pipeline
"""
