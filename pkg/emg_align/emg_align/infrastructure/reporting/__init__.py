"""
Experiment report emission
"""
