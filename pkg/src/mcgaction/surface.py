"""The presented fundamental group of a genus-g surface with n marked points.

The presentation has generators ``a_1..a_g, b_1..b_g, g_1..g_n`` subject to
the single surface relation ``[a_1,b_1]...[a_g,b_g] g_1...g_n = 1``; the last
puncture generator is redundant, and for ``n >= 1`` eliminating it turns the
group into a free group of rank ``2g + n - 1`` where equality and conjugacy
are decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple

from .words import (
    IDENTITY,
    GeneratorSymbol,
    Word,
    alpha,
    beta,
    commutator,
    gamma,
    invert,
    multiply,
    substitute,
    word,
)


class UnsupportedModeError(ValueError):
    """Raised for operations outside a signature's supported mode (e.g. n = 0)."""


@dataclass(frozen=True, order=True)
class Signature:
    """Surface type: genus ``g`` with ``n`` marked points.

    Supported: ``g >= 2`` with any ``n``; ``g = 1`` with ``n >= 1``
    (best-effort generator catalog, see :mod:`mcgaction.action`); ``g = 0``
    with ``n >= 3``.
    """

    g: int
    n: int

    def __post_init__(self) -> None:
        if self.g < 0 or self.n < 0:
            raise ValueError(f"signature ({self.g}, {self.n}): negative entries")
        if self.g == 0 and self.n < 3:
            raise ValueError(f"signature ({self.g}, {self.n}): genus 0 needs n >= 3")
        if (self.g, self.n) == (1, 0):
            raise ValueError("signature (1, 0) is not supported")

    @property
    def rank(self) -> int:
        """Rank of the fundamental group as a free group."""
        return 2 * self.g + self.n - 1

    def __str__(self) -> str:
        return f"(g={self.g}, n={self.n})"


@lru_cache(maxsize=None)
def alphabet(sig: Signature) -> Tuple[GeneratorSymbol, ...]:
    """Presentation generators in order ``a_1..a_g, b_1..b_g, g_1..g_n``."""
    return tuple(
        [alpha(i) for i in range(1, sig.g + 1)]
        + [beta(i) for i in range(1, sig.g + 1)]
        + [gamma(j) for j in range(1, sig.n + 1)]
    )


@lru_cache(maxsize=None)
def surface_relator(sig: Signature) -> Word:
    """The word ``[a_1,b_1]...[a_g,b_g] g_1...g_n``."""
    relator = IDENTITY
    for i in range(1, sig.g + 1):
        relator = multiply(relator, commutator(word(alpha(i)), word(beta(i))))
    for j in range(1, sig.n + 1):
        relator = multiply(relator, word(gamma(j)))
    return relator


@lru_cache(maxsize=None)
def free_basis(sig: Signature) -> Tuple[GeneratorSymbol, ...]:
    """Free generating set once the redundant last puncture loop is dropped."""
    if sig.n == 0:
        raise UnsupportedModeError("n = 0 has no redundant generator to eliminate")
    return alphabet(sig)[:-1]


@lru_cache(maxsize=None)
def _elimination_images(sig: Signature) -> Dict[GeneratorSymbol, Word]:
    symbols = alphabet(sig)
    images = {symbol: word(symbol) for symbol in symbols[:-1]}
    # Solve the relation for g_n: g_n = (g_1...g_{n-1})^-1 (prod [a_i,b_i])^-1.
    punctures = IDENTITY
    for j in range(1, sig.n):
        punctures = multiply(punctures, word(gamma(j)))
    handles = IDENTITY
    for i in range(1, sig.g + 1):
        handles = multiply(handles, commutator(word(alpha(i)), word(beta(i))))
    images[gamma(sig.n)] = multiply(invert(punctures), invert(handles))
    return images


def eliminate_redundant(u: Word, sig: Signature) -> Word:
    """Rewrite ``u`` over the free basis, replacing every ``g_n``.

    This is a homomorphism onto the free group of rank ``2g + n - 1``; the
    surface relator maps to the empty word, and two words are equal
    (conjugate) in the fundamental group iff their images here are equal
    (conjugate) in the free group.
    """
    if sig.n == 0:
        raise UnsupportedModeError("eliminate_redundant requires n >= 1")
    return substitute(u, _elimination_images(sig))
