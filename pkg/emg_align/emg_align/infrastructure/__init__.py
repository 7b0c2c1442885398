"""
Infrastructure layer - configuration files, storage and reports
"""
