"""
Domain constants - acquisition protocol values
"""
