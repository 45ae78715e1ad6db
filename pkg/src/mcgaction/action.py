"""Generator catalog of the mapping class group and its action on the fundamental group.

Each catalog generator is a Dehn twist (or half-twist) acting on the
presentation generators by a short transvection-style rule; all unlisted
generators are fixed.  Every automorphism built here is validated at
construction time: its image of the surface relator must be conjugate to the
relator, which catches any transcription slip in the twist rules.

Composition is function composition with the rightmost factor applied first,
and equality of automorphisms "up to inner" (the honest notion, since the
action is only defined in the outer automorphism group) is decided through
simultaneous conjugacy over the free basis.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .surface import (
    Signature,
    UnsupportedModeError,
    alphabet,
    eliminate_redundant,
    free_basis,
    surface_relator,
)
from .words import (
    GeneratorSymbol,
    Word,
    alpha,
    are_conjugate,
    beta,
    gamma,
    invert,
    multiply,
    simultaneous_conjugator,
    substitute,
    word,
)


class GenKind(enum.Enum):
    B = "tb"
    BI = "tb{i}"
    A1 = "ta1"
    A2 = "ta2"
    AI = "ta{i}"
    C12 = "tc1_2"
    C2I = "tc{2i}_{2i+2}"
    DI = "td{i}"
    OMEGA = "w{i}"


_INDEXED = {GenKind.BI, GenKind.AI, GenKind.C2I, GenKind.DI, GenKind.OMEGA}


@dataclass(frozen=True, order=True)
class MCGGenerator:
    """A symbolic mapping-class-group generator (Dehn twist or half-twist)."""

    kind: GenKind
    index: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind in _INDEXED:
            if self.index is None or self.index < 1:
                raise ValueError(f"generator kind {self.kind.name} needs a positive index")
        elif self.index is not None:
            raise ValueError(f"generator kind {self.kind.name} takes no index")

    def __str__(self) -> str:
        if self.kind is GenKind.C2I:
            return f"tc{2 * self.index}_{2 * self.index + 2}"
        if self.kind in _INDEXED:
            return self.kind.value.format(i=self.index)
        return self.kind.value

    def __repr__(self) -> str:
        return f"MCGGenerator({self})"


def twist_b() -> MCGGenerator:
    return MCGGenerator(GenKind.B)


def twist_bi(i: int) -> MCGGenerator:
    return MCGGenerator(GenKind.BI, i)


def twist_a1() -> MCGGenerator:
    return MCGGenerator(GenKind.A1)


def twist_a2() -> MCGGenerator:
    return MCGGenerator(GenKind.A2)


def twist_ai(i: int) -> MCGGenerator:
    return MCGGenerator(GenKind.AI, i)


def twist_c12() -> MCGGenerator:
    return MCGGenerator(GenKind.C12)


def twist_c2i(i: int) -> MCGGenerator:
    return MCGGenerator(GenKind.C2I, i)


def twist_di(i: int) -> MCGGenerator:
    return MCGGenerator(GenKind.DI, i)


def half_twist(i: int) -> MCGGenerator:
    return MCGGenerator(GenKind.OMEGA, i)


class Mode(enum.Enum):
    PURE = "pure"
    FULL = "full"


@lru_cache(maxsize=None)
def catalog(sig: Signature, mode: Mode = Mode.FULL) -> Tuple[MCGGenerator, ...]:
    """Generator catalog for the pure or full mapping class group of ``sig``.

    For genus 0 the catalog consists of the half-twists alone.  For genus 1
    the twists needing a second handle (ta1, ta2, tc1_2) are unavailable and
    the catalog is best-effort: index 2 falls into the ta{i} family instead.
    """
    g, n = sig.g, sig.n
    if g == 0:
        return tuple(half_twist(i) for i in range(1, n))
    gens: list[MCGGenerator] = [twist_b()]
    gens += [twist_bi(i) for i in range(1, g)]
    if g >= 2:
        gens += [twist_a1(), twist_a2()]
    gens += [twist_ai(i) for i in range(2 * g, 2 * g + n - 1)]
    if g >= 2:
        gens.append(twist_c12())
    gens += [twist_c2i(i) for i in range(1, g - 1)]
    gens += [twist_di(i) for i in range(1, n)]
    if mode is Mode.FULL:
        gens += [half_twist(i) for i in range(1, n)]
    return tuple(gens)


def _require_in_catalog(gen: MCGGenerator, sig: Signature) -> None:
    if gen not in catalog(sig, Mode.FULL):
        raise ValueError(f"generator {gen} is not in the catalog of {sig}")


def sigma_word(sig: Signature) -> Word:
    """The class of the ta2 twisting curve: ``a2^-1 b1 a1 b1^-1``."""
    if sig.g < 2:
        raise ValueError(f"sigma_word needs genus >= 2, got {sig}")
    return word((alpha(2), -1), beta(1), alpha(1), (beta(1), -1))


def lambda_word(i: int, sig: Signature) -> Word:
    """The class of the ta{i} twisting curve: ``g_j g_{j+1} ... g_n a1`` with ``j = i - 2g + 2``."""
    g, n = sig.g, sig.n
    if n < 2 or not 2 * g <= i <= 2 * g + n - 2:
        raise ValueError(f"lambda index {i} out of range [{2 * g}, {2 * g + n - 2}] at {sig}")
    j = i - 2 * g + 2
    return word(*[gamma(k) for k in range(j, n + 1)], alpha(1))


def mu_word(i: int, sig: Signature) -> Word:
    """The class of the tc{2i}_{2i+2} twisting curve: ``a_{i+2}^-1 b_{i+1} a_{i+1} b_{i+1}^-1``."""
    if not 1 <= i <= sig.g - 2:
        raise ValueError(f"mu index {i} out of range [1, {sig.g - 2}] at {sig}")
    return word((alpha(i + 2), -1), beta(i + 1), alpha(i + 1), (beta(i + 1), -1))


@dataclass(frozen=True, eq=False)
class Automorphism:
    """An endomorphism of the fundamental group given by generator images.

    Instances built through :func:`generator_automorphism` are genuine
    automorphisms representing an outer class; raw construction performs no
    relator check (use :func:`preserves_relator` to certify by hand).
    """

    sig: Signature
    images: Dict[GeneratorSymbol, Word]

    def __post_init__(self) -> None:
        expected = set(alphabet(self.sig))
        if set(self.images) != expected:
            missing = sorted(expected - set(self.images))
            extra = sorted(set(self.images) - expected)
            raise ValueError(f"image table mismatch at {self.sig}: missing={missing} extra={extra}")

    def __call__(self, u: Word) -> Word:
        return substitute(u, self.images)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.sig == other.sig and self.images == other.images

    @property
    def is_identity(self) -> bool:
        return all(image == word(symbol) for symbol, image in self.images.items())

    def moved_symbols(self) -> Tuple[GeneratorSymbol, ...]:
        return tuple(s for s in alphabet(self.sig) if self.images[s] != word(s))

    def __repr__(self) -> str:
        moved = {str(s): str(self.images[s]) for s in self.moved_symbols()}
        return f"Automorphism({self.sig}, {moved or 'identity'})"


def identity_automorphism(sig: Signature) -> Automorphism:
    return Automorphism(sig, {symbol: word(symbol) for symbol in alphabet(sig)})


def inner_automorphism(y: Word, sig: Signature) -> Automorphism:
    """Conjugation ``x -> y x y^-1`` by a fixed word."""
    return Automorphism(
        sig, {symbol: multiply(multiply(y, word(symbol)), invert(y)) for symbol in alphabet(sig)}
    )


def _twist_images(gen: MCGGenerator, sig: Signature) -> Dict[GeneratorSymbol, Word]:
    kind, i = gen.kind, gen.index
    images = {symbol: word(symbol) for symbol in alphabet(sig)}
    if kind is GenKind.B:
        images[alpha(1)] = word(alpha(1), (beta(1), -1))
    elif kind is GenKind.BI:
        images[alpha(i + 1)] = word(alpha(i + 1), (beta(i + 1), -1))
    elif kind is GenKind.A1:
        images[beta(1)] = word(beta(1), alpha(1))
    elif kind is GenKind.A2:
        sigma = sigma_word(sig)
        images[alpha(2)] = multiply(multiply(sigma, word(alpha(2))), invert(sigma))
        images[beta(1)] = multiply(sigma, word(beta(1)))
        images[beta(2)] = multiply(word(beta(2)), invert(sigma))
    elif kind is GenKind.AI:
        lam = lambda_word(i, sig)
        j = i - 2 * sig.g + 2
        images[alpha(1)] = multiply(multiply(invert(lam), word(alpha(1))), lam)
        images[beta(1)] = multiply(word(beta(1)), lam)
        for k in range(j, sig.n + 1):
            images[gamma(k)] = multiply(multiply(invert(lam), word(gamma(k))), lam)
    elif kind is GenKind.C12:
        images[beta(2)] = word(beta(2), alpha(2))
    elif kind is GenKind.C2I:
        mu = mu_word(i, sig)
        images[alpha(i + 2)] = multiply(multiply(mu, word(alpha(i + 2))), invert(mu))
        images[beta(i + 1)] = multiply(mu, word(beta(i + 1)))
        images[beta(i + 2)] = multiply(word(beta(i + 2)), invert(mu))
    elif kind is GenKind.DI:
        pass
    elif kind is GenKind.OMEGA:
        images[gamma(i)] = word(gamma(i), gamma(i + 1), (gamma(i), -1))
        images[gamma(i + 1)] = word(gamma(i))
    return images


def _inverse_twist_images(gen: MCGGenerator, sig: Signature) -> Dict[GeneratorSymbol, Word]:
    kind, i = gen.kind, gen.index
    images = {symbol: word(symbol) for symbol in alphabet(sig)}
    if kind is GenKind.B:
        images[alpha(1)] = word(alpha(1), beta(1))
    elif kind is GenKind.BI:
        images[alpha(i + 1)] = word(alpha(i + 1), beta(i + 1))
    elif kind is GenKind.A1:
        images[beta(1)] = word(beta(1), (alpha(1), -1))
    elif kind is GenKind.A2:
        sigma = sigma_word(sig)
        images[alpha(2)] = multiply(multiply(invert(sigma), word(alpha(2))), sigma)
        images[beta(1)] = multiply(invert(sigma), word(beta(1)))
        images[beta(2)] = multiply(word(beta(2)), sigma)
    elif kind is GenKind.AI:
        lam = lambda_word(i, sig)
        j = i - 2 * sig.g + 2
        images[alpha(1)] = multiply(multiply(lam, word(alpha(1))), invert(lam))
        images[beta(1)] = multiply(word(beta(1)), invert(lam))
        for k in range(j, sig.n + 1):
            images[gamma(k)] = multiply(multiply(lam, word(gamma(k))), invert(lam))
    elif kind is GenKind.C12:
        images[beta(2)] = word(beta(2), (alpha(2), -1))
    elif kind is GenKind.C2I:
        mu = mu_word(i, sig)
        images[alpha(i + 2)] = multiply(multiply(invert(mu), word(alpha(i + 2))), mu)
        images[beta(i + 1)] = multiply(invert(mu), word(beta(i + 1)))
        images[beta(i + 2)] = multiply(word(beta(i + 2)), mu)
    elif kind is GenKind.DI:
        pass
    elif kind is GenKind.OMEGA:
        images[gamma(i)] = word(gamma(i + 1))
        images[gamma(i + 1)] = word((gamma(i + 1), -1), gamma(i), gamma(i + 1))
    return images


@lru_cache(maxsize=None)
def generator_automorphism(gen: MCGGenerator, sig: Signature) -> Automorphism:
    """The tabulated automorphism of a catalog generator (all unlisted symbols fixed)."""
    _require_in_catalog(gen, sig)
    phi = Automorphism(sig, _twist_images(gen, sig))
    if preserves_relator(phi) is None:
        raise AssertionError(f"twist table for {gen} at {sig} does not preserve the relator")
    return phi


@lru_cache(maxsize=None)
def inverse_automorphism(gen: MCGGenerator, sig: Signature) -> Automorphism:
    """Automorphism undoing ``gen``; composition with the forward twist is the identity."""
    _require_in_catalog(gen, sig)
    phi_inv = Automorphism(sig, _inverse_twist_images(gen, sig))
    forward = generator_automorphism(gen, sig)
    if not compose(phi_inv, forward).is_identity or not compose(forward, phi_inv).is_identity:
        raise AssertionError(f"inverse table for {gen} at {sig} fails the composition identity")
    return phi_inv


def compose(outer: Automorphism, inner: Automorphism) -> Automorphism:
    """Function composition ``(outer . inner)(x) = outer(inner(x))``."""
    if outer.sig != inner.sig:
        raise ValueError(f"signature mismatch: {outer.sig} vs {inner.sig}")
    return Automorphism(
        outer.sig, {symbol: outer(image) for symbol, image in inner.images.items()}
    )


@dataclass(frozen=True)
class MCGWord:
    """A word in catalog generators: factors with nonzero exponents, same-base neighbours merged."""

    factors: Tuple[Tuple[MCGGenerator, int], ...] = ()

    def __post_init__(self) -> None:
        merged: list[tuple[MCGGenerator, int]] = []
        for gen, exponent in self.factors:
            if exponent == 0:
                continue
            if merged and merged[-1][0] == gen:
                total = merged[-1][1] + exponent
                merged.pop()
                if total:
                    merged.append((gen, total))
            else:
                merged.append((gen, exponent))
        object.__setattr__(self, "factors", tuple(merged))

    @classmethod
    def from_generators(cls, gens: Iterable[MCGGenerator]) -> "MCGWord":
        return cls(tuple((gen, 1) for gen in gens))

    def __mul__(self, other: "MCGWord") -> "MCGWord":
        return MCGWord(self.factors + other.factors)

    def inverse(self) -> "MCGWord":
        return MCGWord(tuple((gen, -exp) for gen, exp in reversed(self.factors)))

    def __len__(self) -> int:
        return sum(abs(exp) for _, exp in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " ".join(
            str(gen) if exp == 1 else f"{gen}^{exp}" for gen, exp in self.factors
        )

    def __repr__(self) -> str:
        return f"MCGWord({self})"


def mcg_word_automorphism(w: MCGWord, sig: Signature) -> Automorphism:
    """Compose the factor automorphisms, rightmost factor applied first."""
    result = identity_automorphism(sig)
    for gen, exponent in w.factors:
        factor = (
            generator_automorphism(gen, sig)
            if exponent > 0
            else inverse_automorphism(gen, sig)
        )
        for _ in range(abs(exponent)):
            result = compose(result, factor)
    return result


def apply_mcg_word(w: MCGWord, u: Word, sig: Signature) -> Word:
    """Image of the loop ``u`` under the mapping class ``w``."""
    alien = u.symbols() - set(alphabet(sig))
    if alien:
        raise ValueError(f"word uses symbols outside the alphabet of {sig}: {sorted(alien)}")
    result = u
    for gen, exponent in reversed(w.factors):
        phi = (
            generator_automorphism(gen, sig)
            if exponent > 0
            else inverse_automorphism(gen, sig)
        )
        for _ in range(abs(exponent)):
            result = phi(result)
    return result


def outer_equal(phi: Automorphism, psi: Automorphism) -> Optional[Word]:
    """Witness ``y`` with ``phi(x) = y psi(x) y^-1`` on the free basis, or None.

    Images are compared after eliminating the redundant puncture generator,
    so this decides genuine equality in the outer automorphism group.  Only
    available for ``n >= 1``; the closed case has no free presentation to
    reduce to.
    """
    if phi.sig != psi.sig:
        raise ValueError(f"signature mismatch: {phi.sig} vs {psi.sig}")
    if phi.sig.n == 0:
        raise UnsupportedModeError("outer_equal requires n >= 1")
    basis = free_basis(phi.sig)
    us = [eliminate_redundant(phi.images[x], phi.sig) for x in basis]
    vs = [eliminate_redundant(psi.images[x], psi.sig) for x in basis]
    return simultaneous_conjugator(us, vs)


def preserves_relator(phi: Automorphism) -> Optional[Word]:
    """Witness ``y`` with ``phi(relator) = y relator y^-1`` in the free group, or None."""
    relator = surface_relator(phi.sig)
    return are_conjugate(phi(relator), relator)
