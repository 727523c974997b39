from .invariants import basic_invariants, full_record, ks_invariants
from .spaces import ParamPair, normalize

__version__ = "0.1.1"

__all__ = ["ParamPair", "normalize", "basic_invariants", "ks_invariants", "full_record"]
