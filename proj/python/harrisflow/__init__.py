"""Harris-flow noises: classification, spectral sets and dimensions."""

import importlib

__all__ = [
    "HarrisConfigError",
    "HarrisNumericalError",
    "box_dimension",
    "classify",
    "classify_tabulated",
    "eval_correlation",
    "generating_function",
    "joint_vs_difference_ks",
    "prob_avoid",
    "prob_nonempty",
    "resolvent_exponent",
    "simulate_npoint",
]

try:
    _impl = importlib.import_module("._harris", __name__)
except ImportError:
    # in-tree test runs put the extension on PYTHONPATH next to the build
    _impl = importlib.import_module("_harris")

globals().update({name: getattr(_impl, name) for name in __all__})
