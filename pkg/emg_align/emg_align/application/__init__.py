"""
Application layer - signal pipeline, alignment, classification, simulation and experiment services
"""
