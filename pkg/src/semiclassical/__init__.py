"""Semiclassical limits of quantized coordinate rings, with exact arithmetic.

The main entry points:

* :mod:`semiclassical.pbw` for PBW presentations and their limits,
* :mod:`semiclassical.poisson` for Poisson brackets,
* :mod:`semiclassical.ideals` for Groebner bases and Poisson cores,
* :mod:`semiclassical.spectra` for torus centers, strata and spectrum posets,
* :mod:`semiclassical.config` and :mod:`semiclassical.cli` for JSON documents
  and the ``semiclassical`` command.
"""
from .config import Config, load_config, loads_config
from .errors import (BoundExceeded, DegreeBoundExceeded, MathError, NotCommutativeLimit, NotStabilized,
                     SemiclassicalError, ValidationError, ZeroDivisorInverse)
from .ideals import (IdealPresentation, MonomialOrder, is_poisson_ideal, point_ideal, stable_core_bounded)
from .pbw import (PBWPresentation, check_confluence, dual_specialize, homogenized_enveloping,
                  semiclassical_bracket)
from .poisson import LieStructureConstants, PoissonStructure, bracket, jacobi_check, kks_structure
from .polynomial import Polynomial
from .spectra import (QTorusPresentation, SpectrumPoset, enumerate_strata, poset_isomorphic,
                      ptorus_center, qtorus_center, qtorus_is_simple, same_core, symplectic_core)

__version__ = "0.1.0"

__all__ = [
    "Config", "load_config", "loads_config",
    "BoundExceeded", "DegreeBoundExceeded", "MathError", "NotCommutativeLimit", "NotStabilized",
    "SemiclassicalError", "ValidationError", "ZeroDivisorInverse",
    "IdealPresentation", "MonomialOrder", "is_poisson_ideal", "point_ideal", "stable_core_bounded",
    "PBWPresentation", "check_confluence", "dual_specialize", "homogenized_enveloping",
    "semiclassical_bracket",
    "LieStructureConstants", "PoissonStructure", "bracket", "jacobi_check", "kks_structure",
    "Polynomial",
    "QTorusPresentation", "SpectrumPoset", "enumerate_strata", "poset_isomorphic", "ptorus_center",
    "qtorus_center", "qtorus_is_simple", "same_core", "symplectic_core",
]
