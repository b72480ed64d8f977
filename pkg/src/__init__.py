"""
apg-sets

Hereditarily finite sets represented as well-founded extensional accessible
pointed graphs: bisimulation, extensional quotients, canonical coding, the
set-forming graph surgeries, a Delta-0 formula evaluator and a checker for the
axioms of a finite category of sets.
"""

__version__ = "1.0.0"
__license__ = "MIT"

from src.core.canon import HfSet, atom, canonicalize, make_set, render, to_apg
from src.core.config_manager import ConfigManager
from src.core.graph_core import RawGraph, WfApg, validate
from src.core.setops import SetConstructor

__all__ = [
    'HfSet',
    'atom',
    'make_set',
    'render',
    'canonicalize',
    'to_apg',
    'RawGraph',
    'WfApg',
    'validate',
    'SetConstructor',
    'ConfigManager',
]
