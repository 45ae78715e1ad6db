"""Text grammar for fundamental-group words and mapping-class words.

Fundamental-group tokens are ``a<i>``, ``b<i>``, ``g<j>`` with an optional
``^<signed int>`` exponent, whitespace-separated; ``1`` denotes the empty
word.  Mapping-class tokens are ``tb``, ``tb<i>``, ``ta<i>``, ``tc1_2``,
``tc<2i>_<2i+2>``, ``td<i>``, ``w<i>`` with the same exponent rule.
Formatting and parsing are mutually inverse on reduced words.
"""

from __future__ import annotations

import re
from typing import List, Optional, Tuple

from .action import (
    GenKind,
    MCGGenerator,
    MCGWord,
    Mode,
    catalog,
    half_twist,
    twist_a1,
    twist_a2,
    twist_ai,
    twist_b,
    twist_bi,
    twist_c12,
    twist_c2i,
    twist_di,
)
from .surface import Signature
from .words import GeneratorSymbol, Kind, Word, alpha, beta, gamma, word


class ParseError(ValueError):
    """Syntax or range error, annotated with the source position."""

    def __init__(self, message: str, text: str, position: int) -> None:
        super().__init__(f"{message} (at position {position}: {text[position:position+12]!r})")
        self.position = position


_PI1_TOKEN = re.compile(r"([abg])(\d+)(?:\^(-?\d+))?$")
_MCG_TOKEN = re.compile(r"(tb|ta|tc|td|w)(\d*)(?:_(\d+))?(?:\^(-?\d+))?$")


def _tokens(text: str) -> List[Tuple[str, int]]:
    return [(m.group(), m.start()) for m in re.finditer(r"\S+", text)]


def parse_pi1_word(text: str, sig: Signature) -> Word:
    """Parse a fundamental-group word and reduce it."""
    syllables: List[Tuple[GeneratorSymbol, int]] = []
    for token, pos in _tokens(text):
        if token == "1":
            continue
        match = _PI1_TOKEN.match(token)
        if not match:
            raise ParseError(f"bad generator token {token!r}", text, pos)
        kind_letter, index_text, exp_text = match.groups()
        index = int(index_text)
        exponent = int(exp_text) if exp_text is not None else 1
        if kind_letter == "a":
            symbol, bound = alpha(index), sig.g
        elif kind_letter == "b":
            symbol, bound = beta(index), sig.g
        else:
            symbol, bound = gamma(index), sig.n
        if not 1 <= index <= bound:
            raise ParseError(
                f"index {index} of {token!r} out of range 1..{bound} at {sig}", text, pos
            )
        if exponent:
            syllables.append((symbol, exponent))
    return word(*syllables)


def format_pi1_word(u: Word) -> str:
    """Render a word with merged exponents; inverse of :func:`parse_pi1_word`."""
    if u.is_identity:
        return "1"
    parts: List[str] = []
    run_symbol, run_total = None, 0
    for letter in u.letters:
        if letter.symbol == run_symbol and (run_total > 0) == (letter.sign > 0):
            run_total += letter.sign
        else:
            if run_symbol is not None:
                parts.append(_syllable(run_symbol, run_total))
            run_symbol, run_total = letter.symbol, letter.sign
    parts.append(_syllable(run_symbol, run_total))
    return " ".join(parts)


def _syllable(symbol: GeneratorSymbol, exponent: int) -> str:
    return str(symbol) if exponent == 1 else f"{symbol}^{exponent}"


def _resolve_mcg_token(
    head: str, index: Optional[int], second: Optional[int], sig: Signature
) -> MCGGenerator:
    g, n = sig.g, sig.n
    if head == "tb":
        if index is None:
            return twist_b()
        if 1 <= index <= g - 1:
            return twist_bi(index)
        raise ValueError(f"tb{index} needs 1 <= i <= g-1 = {g - 1}")
    if head == "ta":
        if index is None:
            raise ValueError("ta needs an index")
        if index == 1 and g >= 2:
            return twist_a1()
        if index == 2 and g >= 2:
            return twist_a2()
        if 2 * g <= index <= 2 * g + n - 2:
            return twist_ai(index)
        raise ValueError(f"ta{index} out of range at {sig}")
    if head == "tc":
        if index is None or second is None:
            raise ValueError("tc token needs the form tc<i>_<j>")
        if (index, second) == (1, 2):
            if g < 2:
                raise ValueError(f"tc1_2 needs genus >= 2, got {sig}")
            return twist_c12()
        if index % 2 == 0 and second == index + 2 and 1 <= index // 2 <= g - 2:
            return twist_c2i(index // 2)
        raise ValueError(f"tc{index}_{second} is not a catalog twist at {sig}")
    if head == "td":
        if index is None or not 1 <= index <= n - 1:
            raise ValueError(f"td{index} needs 1 <= i <= n-1 = {n - 1}")
        return twist_di(index)
    if head == "w":
        if index is None or not 1 <= index <= n - 1:
            raise ValueError(f"w{index} needs 1 <= i <= n-1 = {n - 1}")
        return half_twist(index)
    raise ValueError(f"unknown token head {head!r}")


def parse_mcg_word(text: str, sig: Signature, mode: Mode = Mode.FULL) -> MCGWord:
    """Parse a mapping-class word, validating every factor against the catalog."""
    allowed = set(catalog(sig, mode))
    factors: List[Tuple[MCGGenerator, int]] = []
    for token, pos in _tokens(text):
        if token == "1":
            continue
        match = _MCG_TOKEN.match(token)
        if not match:
            raise ParseError(f"bad mapping-class token {token!r}", text, pos)
        head, index_text, second_text, exp_text = match.groups()
        index = int(index_text) if index_text else None
        second = int(second_text) if second_text is not None else None
        exponent = int(exp_text) if exp_text is not None else 1
        try:
            gen = _resolve_mcg_token(head, index, second, sig)
        except ValueError as exc:
            raise ParseError(str(exc), text, pos) from None
        if gen not in allowed:
            raise ParseError(f"{gen} is not in the {mode.value} catalog at {sig}", text, pos)
        if exponent:
            factors.append((gen, exponent))
    return MCGWord(tuple(factors))


def format_mcg_word(w: MCGWord) -> str:
    if not w.factors:
        return "1"
    return " ".join(
        str(gen) if exp == 1 else f"{gen}^{exp}" for gen, exp in w.factors
    )
