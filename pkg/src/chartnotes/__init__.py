"""
chartnotes - Declarative chart annotation compiler with collision-aware layout.
"""

__version__ = "0.1.0"
