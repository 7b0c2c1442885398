"""
Domain math - linear algebra and filter design
"""
