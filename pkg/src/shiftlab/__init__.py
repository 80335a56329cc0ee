"""Exact shifting numbers of autoequivalences of an elliptic curve."""

from .cover import FunctorWord, GeneratorLetter, LiftedRay, apply_word, word_matrix
from .dynamics import ProductWord, spread_report, tau_exact, tau_ext_limit, tau_heart_limit, tilde_tau
from .model import COH, DObject, HeartCut, standard_generator
from .wordtext import format_word, parse_word

__version__ = "0.1.0"

__all__ = [
    "FunctorWord", "GeneratorLetter", "LiftedRay", "apply_word", "word_matrix",
    "ProductWord", "spread_report", "tau_exact", "tau_ext_limit", "tau_heart_limit", "tilde_tau",
    "COH", "DObject", "HeartCut", "standard_generator",
    "format_word", "parse_word",
]
