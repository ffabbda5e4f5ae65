"""Initializable arrays with constant-time initialization and tiny redundancy."""

from .arena import Arena, ArenaFault, Region
from .baselines import Folklore, Navarro, TrieArray, trie_instance
from .extensions import PackedArray, WithDefault, block_size, iter_written_blocks
from .lightpath import BLACK, GRAY, WHITE, LightPathArray, LightPathTree
from .lightpath.array import ClearableWordArray, redundancy_bound
from .lightpath.forest import Forest
from .lightpath.partial import PartialLightPathArray
from .oracle import OracleArray, check_equivalence, generate_ops
from .registry import METHODS, Params, make
from .words import ClearableArray

__all__ = [
    "Arena", "ArenaFault", "Region", "Folklore", "Navarro", "TrieArray", "trie_instance",
    "PackedArray", "WithDefault", "block_size", "iter_written_blocks",
    "BLACK", "GRAY", "WHITE", "LightPathArray", "LightPathTree", "ClearableWordArray",
    "redundancy_bound", "Forest", "PartialLightPathArray", "OracleArray", "check_equivalence",
    "generate_ops", "METHODS", "Params", "make", "ClearableArray",
]
