"""INTERSTATIS: STATIS para dados intervalares."""

__version__ = '1.0.0'
