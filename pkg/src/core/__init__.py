"""
Core modules: graphs, bisimulation, canonical sets, constructions, logic,
the finite category of sets and the axiom harness
"""

from .canon import HfSet, canonicalize, render, to_apg
from .config_manager import ConfigManager
from .graph_core import RawGraph, WfApg, validate
from .harness import run_harness
from .setops import SetConstructor

__all__ = [
    'HfSet', 'canonicalize', 'render', 'to_apg',
    'RawGraph', 'WfApg', 'validate',
    'SetConstructor', 'run_harness', 'ConfigManager',
]
