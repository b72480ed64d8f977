"""
Utility modules for apg-sets

Only the logger is re-exported: the core modules import it while they load,
so graph file handling lives in `src.utils.file_handler` and is imported
from there.
"""

from .logger import setup_logger

__all__ = ['setup_logger']
