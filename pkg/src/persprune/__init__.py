"""Erosions, prunings and approximate decompositions of grid persistence modules."""

from .decomp import barcode, decompose, is_refinement
from .distances import bottleneck_1d, bottleneck_upset, d_E, d_EN_bracket, search_interleaving
from .erode import (
    ENWitness,
    check_en_witness,
    check_interleaving,
    common_en_from_interleaving,
    erosion,
    img_eps,
    ker_eps,
)
from .estimators import Decomposer, Eroder, Pruner
from .exactlin import DEFAULT_PRIME
from .fileio import load_module, parse_module, save_module, serialize_module
from .grid import Grid, IntervalShape, UpsetShape
from .permod import (
    Morphism,
    PersistenceModule,
    Submodule,
    direct_sum,
    hom_basis,
    interval_module,
    shift_module,
    upset_module,
)
from .prune import pruning, pruning_pair

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PRIME",
    "Grid",
    "IntervalShape",
    "UpsetShape",
    "PersistenceModule",
    "Morphism",
    "Submodule",
    "direct_sum",
    "hom_basis",
    "interval_module",
    "upset_module",
    "shift_module",
    "erosion",
    "img_eps",
    "ker_eps",
    "ENWitness",
    "check_en_witness",
    "check_interleaving",
    "common_en_from_interleaving",
    "pruning",
    "pruning_pair",
    "decompose",
    "barcode",
    "is_refinement",
    "d_E",
    "d_EN_bracket",
    "bottleneck_1d",
    "bottleneck_upset",
    "search_interleaving",
    "load_module",
    "save_module",
    "parse_module",
    "serialize_module",
    "Eroder",
    "Pruner",
    "Decomposer",
]
