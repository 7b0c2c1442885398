"""
Domain layer - entities, protocol constants, numerical primitives and errors
"""
from . import constants, entities, interfaces, math

__all__ = ['entities', 'interfaces', 'constants', 'math']
