"""Text form of functor words: ``S``, ``T``, ``[1]`` and inverses, with exponents.

>>> str(format_word(parse_word("T S^-3 [1]^2")))
'T S^-3 [1]^2'
"""

from __future__ import annotations

import re

from .cover import FunctorWord, GeneratorLetter as L

__all__ = ["WordSyntaxError", "parse_word", "format_word"]

_TOKEN = re.compile(r"^(S|T|\[1\]|\[-1\])(?:\^(-?\d+))?$")

_BASE = {
    "S": (L.MUKAI, L.MUKAI_INV),
    "T": (L.TWIST, L.TWIST_INV),
    "[1]": (L.SHIFT_UP, L.SHIFT_DOWN),
    "[-1]": (L.SHIFT_DOWN, L.SHIFT_UP),
}

# letter -> (token, whether a run of k is written with exponent -k)
_NAMES = {
    L.MUKAI: ("S", False),
    L.MUKAI_INV: ("S", True),
    L.TWIST: ("T", False),
    L.TWIST_INV: ("T", True),
    L.SHIFT_UP: ("[1]", False),
    L.SHIFT_DOWN: ("[-1]", False),
}


class WordSyntaxError(ValueError):
    pass


def parse_word(text: str) -> FunctorWord:
    """Parse whitespace-separated tokens; ``id`` or blank is the identity."""
    letters: list[L] = []
    for tok in text.split():
        if tok == "id":
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise WordSyntaxError(f"bad token {tok!r}")
        fwd, back = _BASE[m.group(1)]
        k = int(m.group(2)) if m.group(2) is not None else 1
        letters.extend([fwd] * k if k >= 0 else [back] * (-k))
    return FunctorWord(letters)


def format_word(w: FunctorWord) -> str:
    """Canonical text; ``parse_word(format_word(w)) == w``."""
    parts: list[str] = []
    letters = w.letters
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] is letters[i]:
            j += 1
        token, negative = _NAMES[letters[i]]
        k = j - i
        if negative:
            parts.append(f"{token}^-{k}")
        else:
            parts.append(token if k == 1 else f"{token}^{k}")
        i = j
    return " ".join(parts) if parts else "id"
