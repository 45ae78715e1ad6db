"""Orbits of finite-group generating vectors under the mapping class group action.

A generating vector assigns a group element to every presentation generator
so that the surface relation evaluates to the identity; precomposing the
corresponding epimorphism with a twist automorphism gives the action.  Since
epimorphisms are classified up to inner automorphisms of the target, vectors
are stored in a canonical form that is minimal under simultaneous conjugation,
and orbits are breadth-first closures under all catalog generators and their
inverses.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .action import MCGGenerator, Mode, catalog, generator_automorphism, inverse_automorphism
from .surface import Signature, alphabet, surface_relator
from .words import GeneratorSymbol, Kind, Word

DEFAULT_BUDGET = 10**7


class GroupFormatError(ValueError):
    """Raised when a group document is malformed or fails the group axioms."""


class BudgetExceededError(RuntimeError):
    """Raised when an enumeration would exceed the configured vector budget."""


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its multiplication table (0-based indices).

    ``table[i][j]`` is the index of ``elements[i] * elements[j]``; words are
    evaluated left to right.
    """

    name: str
    elements: Tuple[str, ...]
    table: Tuple[Tuple[int, ...], ...]
    identity: int
    inverse: Tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "inverse", _validate_group(self))

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    @property
    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n))

    @classmethod
    def from_dict(cls, doc: dict) -> "FiniteGroup":
        """Build and validate a group from the JSON document format.

        Required fields: ``name``, ``order``, ``elements`` (names),
        ``table`` (row-major: nested rows or a flat list of ``order**2``
        indices), ``identity`` (index).
        """
        if not isinstance(doc, dict):
            raise GroupFormatError("group document must be a JSON object")
        missing = [k for k in ("name", "order", "elements", "table", "identity") if k not in doc]
        if missing:
            raise GroupFormatError(f"group document missing fields: {missing}")
        order = doc["order"]
        elements = doc["elements"]
        if not isinstance(order, int) or order < 1:
            raise GroupFormatError(f"order must be a positive integer, got {order!r}")
        if len(elements) != order or len(set(elements)) != order:
            raise GroupFormatError("elements must be `order` distinct names")
        raw = doc["table"]
        if raw and isinstance(raw[0], list):
            rows = raw
        else:
            if len(raw) != order * order:
                raise GroupFormatError(
                    f"flat table must have order^2 = {order * order} entries, got {len(raw)}"
                )
            rows = [raw[i * order : (i + 1) * order] for i in range(order)]
        if len(rows) != order or any(len(row) != order for row in rows):
            raise GroupFormatError(f"table must be {order}x{order}")
        for row in rows:
            for x in row:
                if not isinstance(x, int) or not 0 <= x < order:
                    raise GroupFormatError(f"table entry {x!r} out of range [0, {order - 1}]")
        identity = doc["identity"]
        if not isinstance(identity, int) or not 0 <= identity < order:
            raise GroupFormatError(f"identity index {identity!r} out of range")
        return cls(
            str(doc["name"]),
            tuple(str(e) for e in elements),
            tuple(tuple(row) for row in rows),
            identity,
        )

    def to_dict(self) -> dict:
        return {
            "schema": "mcgaction/group/1",
            "name": self.name,
            "order": self.order,
            "elements": list(self.elements),
            "table": [list(row) for row in self.table],
            "identity": self.identity,
        }

    def element_index(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise GroupFormatError(f"{self.name} has no element named {name!r}") from None


def _validate_group(group: FiniteGroup) -> Tuple[int, ...]:
    n = len(group.elements)
    e = group.identity
    table = group.table
    for a in range(n):
        if table[e][a] != a or table[a][e] != a:
            raise GroupFormatError(
                f"identity axiom fails: element {group.elements[a]!r} under identity"
            )
    inverse = [-1] * n
    for a in range(n):
        for b in range(n):
            if table[a][b] == e and table[b][a] == e:
                inverse[a] = b
                break
        if inverse[a] < 0:
            raise GroupFormatError(f"inverse axiom fails: no inverse for {group.elements[a]!r}")
    # Full associativity up to order 64, a fixed sample grid beyond.
    if n <= 64:
        triples = product(range(n), repeat=3)
    else:
        step = max(1, n // 16)
        picks = range(0, n, step)
        triples = product(picks, picks, picks)
    for a, b, c in triples:
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise GroupFormatError(
                "associativity fails on triple "
                f"({group.elements[a]!r}, {group.elements[b]!r}, {group.elements[c]!r})"
            )
    return tuple(inverse)


def load_group(source: Union[str, Path, dict]) -> FiniteGroup:
    """Load a group from a JSON file path or an already-parsed document."""
    if isinstance(source, dict):
        return FiniteGroup.from_dict(source)
    with open(source, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GroupFormatError(f"{source}: invalid JSON ({exc})") from exc
    return FiniteGroup.from_dict(doc)


def cyclic_group(k: int) -> FiniteGroup:
    """Z/k with additive names 0..k-1."""
    return FiniteGroup(
        f"Z{k}",
        tuple(str(i) for i in range(k)),
        tuple(tuple((i + j) % k for j in range(k)) for i in range(k)),
        0,
    )


def symmetric_group(k: int) -> FiniteGroup:
    """S_k on one-line permutation names; composition is left-to-right."""
    from itertools import permutations

    perms = sorted(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    table = tuple(
        tuple(index[tuple(q[p[i]] for i in range(k))] for q in perms) for p in perms
    )
    names = tuple("".join(str(x + 1) for x in p) for p in perms)
    return FiniteGroup(f"S{k}", names, table, index[tuple(range(k))])


@dataclass(frozen=True)
class GeneratingVector:
    """Images (A_i, B_i, C_j) of the presentation generators, as element indices."""

    sig: Signature
    a: Tuple[int, ...]
    b: Tuple[int, ...]
    c: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.a) != self.sig.g or len(self.b) != self.sig.g or len(self.c) != self.sig.n:
            raise ValueError(
                f"vector shape ({len(self.a)}, {len(self.b)}, {len(self.c)}) "
                f"does not match {self.sig}"
            )

    def entry(self, symbol: GeneratorSymbol) -> int:
        if symbol.kind is Kind.ALPHA:
            return self.a[symbol.index - 1]
        if symbol.kind is Kind.BETA:
            return self.b[symbol.index - 1]
        if symbol.kind is Kind.GAMMA:
            return self.c[symbol.index - 1]
        raise ValueError(f"vectors carry no entry for {symbol}")

    def entries(self) -> Tuple[int, ...]:
        return self.a + self.b + self.c

    def names(self, group: FiniteGroup) -> Tuple[str, ...]:
        return tuple(group.elements[i] for i in self.entries())

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.entries())) + ")"


def evaluate(u: Word, v: GeneratingVector, group: FiniteGroup) -> int:
    """Image of the word ``u`` under the homomorphism defined by ``v``."""
    result = group.identity
    for letter in u.letters:
        x = v.entry(letter.symbol)
        if letter.sign < 0:
            x = group.inv(x)
        result = group.mul(result, x)
    return result


def satisfies_relation(v: GeneratingVector, group: FiniteGroup) -> bool:
    return evaluate(surface_relator(v.sig), v, group) == group.identity


def vector_from_names(
    sig: Signature, group: FiniteGroup, names: Sequence[str]
) -> GeneratingVector:
    """Build a vector from element names ordered like the alphabet; checks the relation."""
    if len(names) != 2 * sig.g + sig.n:
        raise ValueError(f"{sig} needs {2 * sig.g + sig.n} entries, got {len(names)}")
    indices = [group.element_index(name) for name in names]
    g = sig.g
    v = GeneratingVector(
        sig, tuple(indices[:g]), tuple(indices[g : 2 * g]), tuple(indices[2 * g :])
    )
    if not satisfies_relation(v, group):
        raise ValueError(f"vector {names} violates the surface relation in {group.name}")
    return v


def act(gen: MCGGenerator, v: GeneratingVector, group: FiniteGroup) -> GeneratingVector:
    """Precompose the epimorphism with the twist: entry for x becomes eval of x's image."""
    phi = generator_automorphism(gen, v.sig)
    return _act_with_images(phi.images, v, group)


def act_inverse(gen: MCGGenerator, v: GeneratingVector, group: FiniteGroup) -> GeneratingVector:
    phi = inverse_automorphism(gen, v.sig)
    return _act_with_images(phi.images, v, group)


def _act_with_images(
    images: Dict[GeneratorSymbol, Word], v: GeneratingVector, group: FiniteGroup
) -> GeneratingVector:
    sig = v.sig
    values = {symbol: evaluate(images[symbol], v, group) for symbol in alphabet(sig)}
    return GeneratingVector(
        sig,
        tuple(values[s] for s in alphabet(sig)[: sig.g]),
        tuple(values[s] for s in alphabet(sig)[sig.g : 2 * sig.g]),
        tuple(values[s] for s in alphabet(sig)[2 * sig.g :]),
    )


def conjugate_vector(v: GeneratingVector, x: int, group: FiniteGroup) -> GeneratingVector:
    x_inv = group.inv(x)
    conj = lambda a: group.mul(group.mul(x, a), x_inv)
    return GeneratingVector(
        v.sig, tuple(map(conj, v.a)), tuple(map(conj, v.b)), tuple(map(conj, v.c))
    )


def canonical_form(v: GeneratingVector, group: FiniteGroup) -> GeneratingVector:
    """Lexicographically least vector under simultaneous conjugation by the group."""
    return min(
        (conjugate_vector(v, x, group) for x in range(group.order)),
        key=GeneratingVector.entries,
    )


def generated_subgroup_size(entries: Iterable[int], group: FiniteGroup) -> int:
    seen = {group.identity}
    frontier = [group.identity]
    gens = sorted(set(entries) | {group.inv(x) for x in entries})
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = group.mul(a, s)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return len(seen)


@dataclass(frozen=True)
class Policy:
    """Opt-in filters: branch points must be nontrivial, entries must generate."""

    nontrivial_c: bool = False
    generating: bool = False

    def admits(self, v: GeneratingVector, group: FiniteGroup) -> bool:
        if self.nontrivial_c and any(ci == group.identity for ci in v.c):
            return False
        if self.generating and generated_subgroup_size(v.entries(), group) != group.order:
            return False
        return True

    def describe(self) -> str:
        flags = []
        if self.nontrivial_c:
            flags.append("nontrivial-c")
        if self.generating:
            flags.append("surjective")
        return ",".join(flags) if flags else "none"


def _raw_vectors(sig: Signature, group: FiniteGroup) -> Iterable[GeneratingVector]:
    g, n = sig.g, sig.n
    order = group.order
    if n >= 1:
        # The last branch entry is forced: c_n = (prod [a_i,b_i] c_1...c_{n-1})^-1.
        for combo in product(range(order), repeat=2 * g + n - 1):
            a, b, c_head = combo[:g], combo[g : 2 * g], combo[2 * g :]
            acc = group.identity
            for x, y in zip(a, b):
                comm = group.mul(
                    group.mul(x, y), group.mul(group.inv(x), group.inv(y))
                )
                acc = group.mul(acc, comm)
            for ci in c_head:
                acc = group.mul(acc, ci)
            yield GeneratingVector(sig, a, b, c_head + (group.inv(acc),))
    else:
        for combo in product(range(order), repeat=2 * g):
            a, b = combo[:g], combo[g:]
            acc = group.identity
            for x, y in zip(a, b):
                comm = group.mul(
                    group.mul(x, y), group.mul(group.inv(x), group.inv(y))
                )
                acc = group.mul(acc, comm)
            if acc == group.identity:
                yield GeneratingVector(sig, a, b, ())


def _check_budget(sig: Signature, group: FiniteGroup, budget: int) -> None:
    raw_count = group.order ** (2 * sig.g + sig.n)
    if raw_count > budget:
        raise BudgetExceededError(
            f"enumeration at {sig} over {group.name} needs {raw_count} raw vectors, "
            f"budget is {budget}"
        )


def enumerate_vectors(
    sig: Signature,
    group: FiniteGroup,
    policy: Policy = Policy(),
    budget: int = DEFAULT_BUDGET,
    dedupe: bool = False,
) -> List[GeneratingVector]:
    """All policy-admissible solutions of the surface relation, in lexicographic order.

    With ``dedupe`` the list contains one canonical representative per
    conjugacy class of vectors.
    """
    _check_budget(sig, group, budget)
    vectors = [v for v in _raw_vectors(sig, group) if policy.admits(v, group)]
    if not dedupe:
        return vectors
    canonical = {canonical_form(v, group) for v in vectors}
    return sorted(canonical, key=GeneratingVector.entries)


@dataclass(frozen=True)
class Orbit:
    representative: GeneratingVector
    members: Tuple[GeneratingVector, ...]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class OrbitReport:
    sig: Signature
    group_name: str
    mode: Mode
    policy: Policy
    vector_count: int
    orbits: Tuple[Orbit, ...]

    def __post_init__(self) -> None:
        if sum(o.size for o in self.orbits) != self.vector_count:
            raise AssertionError("orbit sizes do not sum to the vector count")

    @property
    def orbit_count(self) -> int:
        return len(self.orbits)

    def to_text(self, group: Optional[FiniteGroup] = None) -> str:
        lines = [
            f"orbit census at {self.sig} over {self.group_name} "
            f"({self.mode.value} mapping class group, policy: {self.policy.describe()})",
            f"  canonical vectors: {self.vector_count}, orbits: {self.orbit_count}",
        ]
        for k, orbit in enumerate(self.orbits, start=1):
            rep = (
                "(" + ", ".join(orbit.representative.names(group)) + ")"
                if group
                else str(orbit.representative)
            )
            lines.append(f"  orbit {k}: size {orbit.size}, representative {rep}")
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "schema": "mcgaction/orbit-report/1",
            "signature": {"g": self.sig.g, "n": self.sig.n},
            "group": self.group_name,
            "mode": self.mode.value,
            "policy": {
                "nontrivial_c": self.policy.nontrivial_c,
                "surjective": self.policy.generating,
            },
            "vector_count": self.vector_count,
            "orbit_count": self.orbit_count,
            "orbits": [
                {
                    "size": orbit.size,
                    "representative": list(orbit.representative.entries()),
                }
                for orbit in self.orbits
            ],
        }


def enumerate_orbits(
    sig: Signature,
    group: FiniteGroup,
    policy: Policy = Policy(),
    mode: Mode = Mode.FULL,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> OrbitReport:
    """Partition the canonical vectors into mapping-class-group orbits.

    Breadth-first closure under every catalog generator and its inverse,
    acting then canonicalizing; orbits come out sorted by representative,
    so the report is independent of scheduling.
    """
    start_vectors = enumerate_vectors(sig, group, policy, budget, dedupe=True)
    gens = catalog(sig, mode)
    images = [generator_automorphism(g_, sig).images for g_ in gens]
    images += [inverse_automorphism(g_, sig).images for g_ in gens]

    def neighbours(v: GeneratingVector) -> List[GeneratingVector]:
        return [canonical_form(_act_with_images(imgs, v, group), group) for imgs in images]

    start_set = set(start_vectors)
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        visited: set[GeneratingVector] = set()
        orbits: List[Orbit] = []
        for seed in start_vectors:
            if seed in visited:
                continue
            members = {seed}
            frontier = [seed]
            while frontier:
                if pool is None:
                    expansions = map(neighbours, frontier)
                else:
                    expansions = pool.map(neighbours, frontier)
                nxt = set()
                for batch in expansions:
                    for w in batch:
                        if w not in members:
                            members.add(w)
                            nxt.add(w)
                frontier = sorted(nxt, key=GeneratingVector.entries)
            stray = members - start_set
            if stray:
                raise AssertionError(
                    f"orbit of {seed} left the admissible vector set: {sorted(map(str, stray))}"
                )
            visited |= members
            orbits.append(Orbit(seed, tuple(sorted(members, key=GeneratingVector.entries))))
    finally:
        if pool is not None:
            pool.shutdown()
    return OrbitReport(sig, group.name, mode, policy, len(start_vectors), tuple(orbits))
