"""
Bundled example specifications.
"""

from rsos.data.loader import SpecLoader, resolve_spec

__all__ = ["SpecLoader", "resolve_spec"]
