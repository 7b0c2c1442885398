"""
On-disk storage: day directories, model files and day sources
"""
