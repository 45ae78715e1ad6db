"""Free-group word algebra over the surface-group alphabet.

Words are immutable, freely reduced sequences of signed letters.  The letter
alphabet carries three user-visible kinds (handle loops ``a_i``/``b_i`` and
puncture loops ``g_j``) plus a reserved ``marker`` kind for internal alphabet
extensions; the conjugacy routines refuse words containing markers.
Conjugation follows the exponential convention ``w^y = y w y^-1`` throughout.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence, Tuple


class Kind(enum.IntEnum):
    """Letter kinds, in canonical comparison order."""

    ALPHA = 0
    BETA = 1
    GAMMA = 2
    MARKER = 3

    @property
    def prefix(self) -> str:
        return _KIND_PREFIX[self]


_KIND_PREFIX = {Kind.ALPHA: "a", Kind.BETA: "b", Kind.GAMMA: "g", Kind.MARKER: "t#"}


class GeneratorSymbol(NamedTuple):
    kind: Kind
    index: int

    def __str__(self) -> str:
        return f"{self.kind.prefix}{self.index}"


class Letter(NamedTuple):
    symbol: GeneratorSymbol
    sign: int

    def inverse(self) -> "Letter":
        return Letter(self.symbol, -self.sign)

    def __str__(self) -> str:
        return str(self.symbol) + ("" if self.sign > 0 else "^-1")


def alpha(index: int) -> GeneratorSymbol:
    return GeneratorSymbol(Kind.ALPHA, index)


def beta(index: int) -> GeneratorSymbol:
    return GeneratorSymbol(Kind.BETA, index)


def gamma(index: int) -> GeneratorSymbol:
    return GeneratorSymbol(Kind.GAMMA, index)


def marker(index: int) -> GeneratorSymbol:
    return GeneratorSymbol(Kind.MARKER, index)


def letter_key(letter: Letter) -> Tuple[int, int, int]:
    """Total order on letters: kind, then index, positive before negative."""
    return (letter.symbol.kind, letter.symbol.index, 0 if letter.sign > 0 else 1)


def _reduce_letters(letters: Iterable[Letter]) -> Tuple[Letter, ...]:
    out: list[Letter] = []
    for letter in letters:
        if out and out[-1].symbol == letter.symbol and out[-1].sign == -letter.sign:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def _is_reduced(letters: Sequence[Letter]) -> bool:
    return all(
        not (x.symbol == y.symbol and x.sign == -y.sign)
        for x, y in zip(letters, letters[1:])
    )


@dataclass(frozen=True)
class Word:
    """A freely reduced word.  Use :func:`reduce` to build one from raw letters."""

    letters: Tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        if not _is_reduced(self.letters):
            raise ValueError(f"word is not freely reduced: {self.letters}")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def inverse(self) -> "Word":
        return invert(self)

    def symbols(self) -> set[GeneratorSymbol]:
        return {letter.symbol for letter in self.letters}

    def sort_key(self) -> Tuple[Tuple[int, int, int], ...]:
        return tuple(letter_key(letter) for letter in self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(str(letter) for letter in self.letters)

    def __repr__(self) -> str:
        return f"Word({self})"


IDENTITY = Word()


def word(*syllables: Tuple[GeneratorSymbol, int] | GeneratorSymbol) -> Word:
    """Build a word from symbols or (symbol, exponent) syllables, then reduce.

    >>> str(word(alpha(1), (beta(1), -1)))
    'a1 b1^-1'
    """
    letters: list[Letter] = []
    for item in syllables:
        if isinstance(item, GeneratorSymbol):
            symbol, exponent = item, 1
        else:
            symbol, exponent = item
        sign = 1 if exponent > 0 else -1
        letters.extend(Letter(symbol, sign) for _ in range(abs(exponent)))
    return reduce(letters)


def reduce(raw: Iterable[Letter]) -> Word:
    """Freely reduce a raw letter sequence.  Idempotent."""
    return Word(_reduce_letters(raw))


def multiply(u: Word, v: Word) -> Word:
    """Reduced concatenation ``u v``."""
    if u.is_identity:
        return v
    if v.is_identity:
        return u
    left = list(u.letters)
    for letter in v.letters:
        if left and left[-1].symbol == letter.symbol and left[-1].sign == -letter.sign:
            left.pop()
        else:
            left.append(letter)
    return Word(tuple(left))


def invert(u: Word) -> Word:
    return Word(tuple(letter.inverse() for letter in reversed(u.letters)))


def power(u: Word, exponent: int) -> Word:
    base = u if exponent >= 0 else invert(u)
    result = IDENTITY
    for _ in range(abs(exponent)):
        result = multiply(result, base)
    return result


def conjugate(w: Word, y: Word) -> Word:
    """``w^y = y w y^-1``."""
    return multiply(multiply(y, w), invert(y))


def commutator(x: Word, y: Word) -> Word:
    """``[x, y] = x y x^-1 y^-1``."""
    return multiply(multiply(x, y), multiply(invert(x), invert(y)))


def contains_marker(u: Word) -> bool:
    return any(letter.symbol.kind is Kind.MARKER for letter in u.letters)


def _reject_markers(words: Iterable[Word], operation: str) -> None:
    for u in words:
        if contains_marker(u):
            raise ValueError(f"{operation} does not accept words with marker letters: {u}")


@dataclass(frozen=True)
class CyclicWord:
    """Cyclically reduced word in its canonical (lexicographically minimal) rotation.

    Two words are conjugate in the free group iff their canonical cyclic
    words are identical, which is what makes this the equality test behind
    every outer-automorphism comparison.
    """

    letters: Tuple[Letter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "(" + " ".join(str(letter) for letter in self.letters) + ")"

    def __repr__(self) -> str:
        return f"CyclicWord({self})"


def _cyclic_peel(letters: Tuple[Letter, ...]) -> Tuple[Tuple[Letter, ...], Tuple[Letter, ...]]:
    """Split reduced ``letters`` as ``peel + core + peel^-1`` with core cyclically reduced."""
    i, j = 0, len(letters)
    while j - i >= 2 and letters[i] == letters[j - 1].inverse():
        i += 1
        j -= 1
    return letters[i:j], letters[:i]


def _min_rotation(letters: Tuple[Letter, ...]) -> int:
    keys = [letter_key(letter) for letter in letters]
    doubled = keys + keys
    n = len(letters)
    best = 0
    for start in range(1, n):
        if doubled[start : start + n] < doubled[best : best + n]:
            best = start
    return best


def cyclic_normal_form(u: Word) -> Tuple[CyclicWord, Word]:
    """Canonical cyclic word of ``u`` plus a prefix with ``u = conjugate(core, prefix)``."""
    core, peel = _cyclic_peel(u.letters)
    if not core:
        return CyclicWord(), Word(peel[:0])
    start = _min_rotation(core)
    canonical = core[start:] + core[:start]
    prefix = Word(peel + core[:start])
    return CyclicWord(canonical), prefix


def primitive_root(u: Word) -> Word:
    """Smallest ``r`` with ``u = r^k`` for some ``k >= 1`` (``u`` itself if primitive)."""
    letters = u.letters
    n = len(letters)
    for period in range(1, n + 1):
        if n % period:
            continue
        block = letters[:period]
        if block * (n // period) == letters:
            return Word(block)
    return u


def _centralizer_generator(v: Word) -> Optional[Word]:
    """Generator of the centralizer of ``v`` in the free group, or None if ``v`` is trivial."""
    if v.is_identity:
        return None
    core, peel = _cyclic_peel(v.letters)
    root = primitive_root(Word(core))
    return conjugate(root, Word(peel))


def _minimal_coset_word(y: Word, h: Optional[Word]) -> Word:
    # Minimize y over the coset y * <h>, shortest first then letter order.
    if h is None or h.is_identity:
        return y
    bound = 2 * len(y) // max(len(primitive_root(h)), 1) + 2
    candidates = [multiply(y, power(h, k)) for k in range(-bound, bound + 1)]
    return min(candidates, key=lambda w: (len(w), w.sort_key()))


def are_conjugate(u: Word, v: Word) -> Optional[Word]:
    """A witness ``y`` with ``conjugate(v, y) = u``, or None if ``u`` and ``v`` are not conjugate.

    The witness is the shortest solution (ties broken by letter order), so
    repeated runs are bit-stable.
    """
    _reject_markers((u, v), "are_conjugate")
    core_u, prefix_u = cyclic_normal_form(u)
    core_v, prefix_v = cyclic_normal_form(v)
    if core_u != core_v:
        return None
    y = _minimal_coset_word(multiply(prefix_u, invert(prefix_v)), _centralizer_generator(v))
    if conjugate(v, y) != u:
        raise AssertionError(f"conjugacy witness failed re-verification: {y}")
    return y


def _solve_power_conjugacy(h: Word, w: Word, u: Word) -> Optional[int] | str:
    """Solve ``h^m w h^-m = u`` for an integer ``m``.

    Returns the unique solution, the string ``"all"`` when every ``m`` works
    (``h`` commutes with ``w`` and ``w = u``), or None.
    """
    if conjugate(w, h) == w:
        return "all" if w == u else None
    core, peel = _cyclic_peel(h.letters)
    root = primitive_root(Word(core))
    p = Word(peel)
    w1 = multiply(multiply(invert(p), w), p)
    u1 = multiply(multiply(invert(p), u), p)
    bound = (len(u1) + 2 * len(w1)) // (2 * len(root)) + 1
    for m in range(-bound, bound + 1):
        if conjugate(w1, power(root, m)) == u1:
            return m
    return None


def simultaneous_conjugator(us: Sequence[Word], vs: Sequence[Word]) -> Optional[Word]:
    """One ``y`` with ``conjugate(vs[i], y) = us[i]`` for every ``i``, or None.

    The solution set for a single pair is a coset ``y_0 <c>`` of the (cyclic)
    centralizer of ``v_i``; the pairs are processed in order, narrowing that
    coset until it is pinned to a single word, shown empty, or exhausted.
    The returned witness is the shortest solution (letter order breaking
    ties) and is re-verified on every pair before being returned.
    """
    if len(us) != len(vs):
        raise ValueError(f"tuple length mismatch: {len(us)} vs {len(vs)}")
    if not us:
        raise ValueError("simultaneous_conjugator needs at least one word pair")
    _reject_markers(us, "simultaneous_conjugator")
    _reject_markers(vs, "simultaneous_conjugator")

    base: Optional[Word] = None  # None until the first constraining pair
    generator: Optional[Word] = None  # coset direction; None once y is unique
    for u, v in zip(us, vs):
        if v.is_identity:
            if not u.is_identity:
                return None
            continue
        if base is None:
            core_u, prefix_u = cyclic_normal_form(u)
            core_v, prefix_v = cyclic_normal_form(v)
            if core_u != core_v:
                return None
            base = multiply(prefix_u, invert(prefix_v))
            generator = _centralizer_generator(v)
        elif generator is None:
            if conjugate(v, base) != u:
                return None
        else:
            exponent = _solve_power_conjugacy(
                generator, conjugate(v, base), u
            )
            if exponent is None:
                return None
            if exponent != "all":
                base = multiply(base, power(generator, exponent))
                generator = None
    if base is None:
        return IDENTITY
    y = _minimal_coset_word(base, generator)
    if not all(conjugate(v, y) == u for u, v in zip(us, vs)):
        raise AssertionError("simultaneous conjugacy witness failed re-verification")
    return y


def substitute(u: Word, images: Mapping[GeneratorSymbol, Word]) -> Word:
    """Homomorphic image of ``u`` under ``symbol -> images[symbol]``, reduced."""
    out: list[Letter] = []
    for letter in u.letters:
        image = images.get(letter.symbol)
        if image is None:
            raise KeyError(f"no image provided for generator {letter.symbol}")
        piece = image.letters if letter.sign > 0 else invert(image).letters
        for img_letter in piece:
            if out and out[-1].symbol == img_letter.symbol and out[-1].sign == -img_letter.sign:
                out.pop()
            else:
                out.append(img_letter)
    return Word(tuple(out))
