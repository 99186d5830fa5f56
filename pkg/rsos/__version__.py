"""Version information for rsos package."""

__version__ = "0.1.0"
__author__ = "rsos developers"
__email__ = ""
__license__ = "MIT"
__copyright__ = "Copyright 2026 rsos developers"
__status__ = "Alpha"
