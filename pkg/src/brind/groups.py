"""Finite permutation groups: stabilizer chains, classes, subgroups, cosets.

Everything here is exact and deterministic: conjugacy-class and subgroup
representatives are lexicographic minima, so repeated runs (and golden
files) always see the same choices.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import lcm

from .errors import CapacityError, ConsistencyError, InputError
from .perms import Permutation, cycle_string, identity, parse_cycles

__all__ = [
    "PermGroup",
    "Subgroup",
    "ConjClass",
    "DoubleCoset",
    "AbelianQuotient",
    "GroupFile",
    "schreier_sims",
    "conjugacy_classes",
    "subgroups_up_to_conjugacy",
    "normalizer",
    "double_cosets",
    "abelianization",
    "parse_group_file",
    "load_group",
    "DEFAULT_BOUND",
]

DEFAULT_BOUND = 10_000


def _dedup(perms):
    seen = {}
    for p in perms:
        seen.setdefault(p.images, p)
    return list(seen.values())


def _closure(degree: int, gens, cap: int | None = None) -> set[Permutation]:
    """Exhaustive closure of a generating set under products."""
    gens = [g for g in _dedup(gens) if not g.is_identity()]
    elems = {identity(degree)}
    frontier = list(elems)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = g * x
                if y not in elems:
                    elems.add(y)
                    new.append(y)
                    if cap is not None and len(elems) > cap:
                        raise CapacityError("group closure exceeds enumeration bound", cap)
        frontier = new
    return elems


class PermGroup:
    """A finite permutation group with a stabilizer-chain certificate.

    Immutable after construction; derived structures (elements, classes,
    subgroup lattice, character table, ...) are cached under a lock.
    """

    def __init__(self, generators, degree: int | None = None, bound: int = DEFAULT_BOUND):
        generators = list(generators)
        if degree is None:
            if not generators:
                raise InputError("degree is required for an empty generating set")
            degree = generators[0].degree
        for g in generators:
            if g.degree != degree:
                raise InputError("generators have inconsistent degrees")
        self.degree = degree
        self.generators = tuple(_dedup(g for g in generators if not g.is_identity()))
        self.bound = bound
        self._levels = _build_chain(self.generators, degree)
        self.order = 1
        for _b, transversal in self._levels:
            self.order *= len(transversal)
        self._cache: dict = {}
        self._lock = threading.RLock()

    # -- membership ------------------------------------------------------

    def __contains__(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            return False
        return _sift(self._levels, p) is None

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(b for b, _t in self._levels)

    @cached_property
    def elements(self) -> tuple[Permutation, ...]:
        """All elements, lexicographically sorted.

        Computed by exhaustive closure of the generators, which doubles as
        the verification of the stabilizer-chain order.
        """
        if self.order > self.bound:
            raise CapacityError("element enumeration requires order <= bound", self.bound)
        elems = _closure(self.degree, self.generators, cap=self.order)
        if len(elems) != self.order:
            raise ConsistencyError(
                f"stabilizer chain order {self.order} != closure count {len(elems)}"
            )
        return tuple(sorted(elems))

    @cached_property
    def _element_set(self) -> frozenset[Permutation]:
        return frozenset(self.elements)

    @cached_property
    def exponent(self) -> int:
        return lcm(*(g.order() for g in self.elements))

    # -- conjugacy classes -------------------------------------------------

    @cached_property
    def conjugacy_classes(self) -> tuple["ConjClass", ...]:
        gens = self.generators
        class_of: dict[Permutation, int] = {}
        classes = []
        for e in self.elements:
            if e in class_of:
                continue
            idx = len(classes)
            orbit = {e}
            frontier = [e]
            while frontier:
                new = []
                for x in frontier:
                    for g in gens:
                        y = x.conjugate(g)
                        if y not in orbit:
                            orbit.add(y)
                            new.append(y)
                frontier = new
            for x in orbit:
                class_of[x] = idx
            # sorted scan: the first unseen element is the class minimum
            classes.append(ConjClass(representative=e, size=len(orbit), index=idx))
        self._cache["class_of"] = class_of
        return tuple(classes)

    def class_index(self, p: Permutation) -> int:
        self.conjugacy_classes
        return self._cache["class_of"][p]

    def power_classes(self, n: int) -> tuple[int, ...]:
        """For each class i, the class index of rep_i ** n."""
        with self._lock:
            cache = self._cache.setdefault("power_classes", {})
            if n not in cache:
                cache[n] = tuple(
                    self.class_index(c.representative**n) for c in self.conjugacy_classes
                )
            return cache[n]

    def inverse_classes(self) -> tuple[int, ...]:
        return self.power_classes(-1)

    # -- subgroups ---------------------------------------------------------

    def subgroup(self, generators) -> "Subgroup":
        return Subgroup.from_generators(self, generators)

    def subgroup_from_elements(self, elems) -> "Subgroup":
        return Subgroup(self, frozenset(elems))

    @cached_property
    def trivial_subgroup(self) -> "Subgroup":
        return self.subgroup_from_elements({identity(self.degree)})

    @cached_property
    def full_subgroup(self) -> "Subgroup":
        return self.subgroup_from_elements(self.elements)

    @cached_property
    def all_subgroups(self) -> tuple["Subgroup", ...]:
        """Every subgroup, by cyclic bottom-up join closure."""
        if self.order > self.bound:
            raise CapacityError("subgroup enumeration requires order <= bound", self.bound)
        cyclics = {}
        for g in self.elements:
            cyc = frozenset(_cyclic_closure(g, self.degree))
            cyclics.setdefault(cyc, None)
        cyclic_sets = sorted(cyclics, key=_set_key)
        known = {frozenset({identity(self.degree)})} | set(cyclic_sets)
        queue = sorted(known, key=_set_key)
        while queue:
            current = queue.pop(0)
            for cyc in cyclic_sets:
                if cyc <= current:
                    continue
                join = frozenset(_closure(self.degree, list(current | cyc)))
                if join not in known:
                    known.add(join)
                    queue.append(join)
        subs = [Subgroup(self, s) for s in known]
        subs.sort(key=lambda s: (s.order, s.key))
        return tuple(subs)

    @cached_property
    def subgroup_classes(self) -> tuple["Subgroup", ...]:
        """One representative per conjugacy class of subgroups."""
        by_set = {s.element_set: s for s in self.all_subgroups}
        seen: set[frozenset] = set()
        reps = []
        for s in self.all_subgroups:  # sorted, so a new orbit is met at its minimum
            if s.element_set in seen:
                continue
            orbit = {s.element_set}
            frontier = [s.element_set]
            while frontier:
                new = []
                for cur in frontier:
                    for g in self.generators:
                        conj = frozenset(x.conjugate(g) for x in cur)
                        if conj not in orbit:
                            orbit.add(conj)
                            new.append(conj)
                frontier = new
            seen |= orbit
            reps.append(by_set[s.element_set])
        return tuple(reps)

    # -- misc ---------------------------------------------------------------

    @cached_property
    def structure_hash(self) -> str:
        """Hash of the element set; stable across generator presentations."""
        blob = f"degree {self.degree};" + ";".join(
            ",".join(map(str, p.images)) for p in self.elements
        )
        return hashlib.sha256(blob.encode()).hexdigest()

    def __repr__(self):
        gens = ", ".join(cycle_string(g) for g in self.generators) or "()"
        return f"PermGroup(degree={self.degree}, order={self.order}, gens=[{gens}])"


def _cyclic_closure(g: Permutation, degree: int):
    out = [identity(degree)]
    cur = g
    while not cur.is_identity():
        out.append(cur)
        cur = cur * g
    return out


def _set_key(elems):
    return (len(elems), tuple(sorted(p.images for p in elems)))


def _build_chain(gens, degree):
    levels = []
    current = sorted(_dedup(g for g in gens if not g.is_identity()))
    while current:
        b = min(min(i for i, x in enumerate(s.images) if x != i) for s in current)
        transversal = {b: identity(degree)}
        frontier = [b]
        while frontier:
            new = []
            for x in frontier:
                for s in current:
                    y = s(x)
                    if y not in transversal:
                        transversal[y] = s * transversal[x]
                        new.append(y)
            frontier = new
        schreier = {}
        for x in sorted(transversal):
            for s in current:
                y = s(x)
                sg = transversal[y].inverse() * s * transversal[x]
                if not sg.is_identity():
                    schreier.setdefault(sg.images, sg)
        levels.append((b, transversal))
        current = sorted(schreier.values())
    return levels


def _sift(levels, p: Permutation) -> Permutation | None:
    """Sift through the chain; None if p is a member, else the residue."""
    g = p
    for b, transversal in levels:
        x = g(b)
        if x not in transversal:
            return g
        g = transversal[x].inverse() * g
    return None if g.is_identity() else g


@dataclass(frozen=True)
class ConjClass:
    representative: Permutation
    size: int
    index: int

    def power_map(self, group: "PermGroup", exponents) -> dict[int, int]:
        return {n: group.power_classes(n)[self.index] for n in exponents}


class Subgroup:
    """A subgroup of a parent group, carried as an explicit element set."""

    def __init__(self, parent: PermGroup, elements: frozenset[Permutation]):
        for p in elements:
            if p not in parent:
                raise InputError(f"element {cycle_string(p)} does not lie in the parent group")
        if parent.order % len(elements) != 0:
            raise ConsistencyError("subgroup size does not divide the group order")
        if len(elements) <= 48:  # cheap closure sanity at corpus scale
            for a in elements:
                for b in elements:
                    if a * b not in elements:
                        raise ConsistencyError("subgroup element set is not closed")
        self.parent = parent
        self.element_set = frozenset(elements)
        self.order = len(elements)
        self.generators = _minimal_generators(parent.degree, self.element_set)
        self._cache: dict = {}
        self._lock = threading.RLock()

    @classmethod
    def from_generators(cls, parent: PermGroup, generators) -> "Subgroup":
        generators = list(generators)
        for g in generators:
            if g not in parent:
                raise InputError(f"generator {cycle_string(g)} does not lie in the parent group")
        return cls(parent, frozenset(_closure(parent.degree, generators, cap=parent.order)))

    @property
    def elements(self) -> tuple[Permutation, ...]:
        with self._lock:
            if "elements" not in self._cache:
                self._cache["elements"] = tuple(sorted(self.element_set))
            return self._cache["elements"]

    @property
    def key(self):
        with self._lock:
            if "key" not in self._cache:
                self._cache["key"] = tuple(sorted(p.images for p in self.element_set))
            return self._cache["key"]

    def as_group(self) -> PermGroup:
        with self._lock:
            if "group" not in self._cache:
                if self.order == self.parent.order:
                    grp = self.parent  # Ind_G^G / Res_G^G act on the parent itself
                else:
                    grp = PermGroup(
                        self.generators, degree=self.parent.degree, bound=self.parent.bound
                    )
                    if grp.order != self.order:
                        raise ConsistencyError("subgroup generator closure has wrong order")
                self._cache["group"] = grp
            return self._cache["group"]

    def contains(self, other: "Subgroup") -> bool:
        return other.element_set <= self.element_set

    def conjugated(self, g: Permutation) -> "Subgroup":
        return Subgroup(self.parent, frozenset(x.conjugate(g) for x in self.element_set))

    def __contains__(self, p: Permutation) -> bool:
        return p in self.element_set

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.parent is other.parent
            and self.element_set == other.element_set
        )

    def __hash__(self):
        return hash((id(self.parent), self.element_set))

    def __repr__(self):
        gens = ", ".join(cycle_string(g) for g in self.generators) or "()"
        return f"Subgroup(order={self.order}, gens=[{gens}])"


def _minimal_generators(degree, element_set) -> tuple[Permutation, ...]:
    gens: list[Permutation] = []
    have = {identity(degree)}
    for p in sorted(element_set):
        if p in have:
            continue
        gens.append(p)
        have = _closure(degree, gens)
        if len(have) == len(element_set):
            break
    return tuple(gens)


@dataclass(frozen=True)
class DoubleCoset:
    representative: Permutation
    size: int
    intersection: Subgroup  # H meet g K g^-1


@dataclass(frozen=True)
class AbelianQuotient:
    """H/[H,H] in invariant-factor form d1 | d2 | ... (ascending)."""

    invariant_factors: tuple[int, ...]
    coordinates: dict  # element of H -> exponent tuple, one entry per factor
    generator_images: tuple[tuple[int, ...], ...]  # coordinates of H's generators


# -- spec-level operations ----------------------------------------------------


def schreier_sims(generators, degree: int | None = None, bound: int = DEFAULT_BOUND) -> PermGroup:
    """Build a group with a verified stabilizer chain from generators."""
    return PermGroup(generators, degree=degree, bound=bound)


def conjugacy_classes(G: PermGroup) -> tuple[ConjClass, ...]:
    return G.conjugacy_classes


def subgroups_up_to_conjugacy(G: PermGroup) -> tuple[Subgroup, ...]:
    return G.subgroup_classes


def normalizer(G: PermGroup, H: Subgroup) -> Subgroup:
    if not H.element_set <= G._element_set:
        raise InputError("normalizer requires H <= G")
    hset = H.element_set
    members = [g for g in G.elements if frozenset(x.conjugate(g) for x in hset) == hset]
    return G.subgroup_from_elements(members)


def double_cosets(G: PermGroup, H: Subgroup, K: Subgroup) -> list[DoubleCoset]:
    """Representatives of H\\G/K with the subgroups H meet gKg^-1."""
    if not (H.element_set <= G._element_set and K.element_set <= G._element_set):
        raise InputError("double cosets require H, K <= G")
    seen: set[Permutation] = set()
    out = []
    for g in G.elements:
        if g in seen:
            continue
        coset = {h * g * k for h in H.element_set for k in K.element_set}
        seen |= coset
        ginv = g.inverse()
        meet = frozenset(x for x in H.element_set if (ginv * x * g) in K.element_set)
        out.append(DoubleCoset(representative=g, size=len(coset), intersection=Subgroup(G, meet)))
    return out


def abelianization(H: Subgroup) -> AbelianQuotient:
    """H/[H,H] with explicit coordinates for every element of H."""
    degree = H.parent.degree
    elems = H.elements
    comms = {a.inverse() * b.inverse() * a * b for a in elems for b in elems}
    derived = _closure(degree, list(comms))
    coset_of: dict[Permutation, Permutation] = {}
    reps: list[Permutation] = []
    for g in elems:  # sorted scan: representative is the coset minimum
        if g in coset_of:
            continue
        for d in sorted(g * x for x in derived):
            coset_of[d] = g
        reps.append(g)
    qid = coset_of[identity(degree)]
    qmul = {(a, b): coset_of[a * b] for a in reps for b in reps}

    def qorder(x):
        n, cur = 1, x
        while cur != qid:
            cur = qmul[cur, x]
            n += 1
        return n

    # primary decomposition, then CRT-merge into invariant factors
    primes = sorted({p for p, _q in _factor_pairs(len(reps))})
    per_prime: dict[int, list[Permutation]] = {}
    for p in primes:
        torsion = [x for x in reps if _is_p_power(qorder(x), p)]
        per_prime[p] = _abelian_p_basis(torsion, qmul, qid, qorder)
    width = max((len(b) for b in per_prime.values()), default=0)
    factors_desc = []
    basis_desc = []
    for i in range(width):
        f = 1
        z = qid
        for p in primes:
            basis = per_prime[p]
            if i < len(basis):
                f *= qorder(basis[i])
                z = qmul[z, basis[i]]
        factors_desc.append(f)
        basis_desc.append(z)
    factors = tuple(reversed(factors_desc))
    basis = list(reversed(basis_desc))
    coords_of_rep: dict[Permutation, tuple[int, ...]] = {}
    for tup in product(*(range(d) for d in factors)):
        acc = qid
        for z, e in zip(basis, tup):
            for _ in range(e):
                acc = qmul[acc, z]
        coords_of_rep.setdefault(acc, tup)
    if len(coords_of_rep) != len(reps):
        raise ConsistencyError("abelian basis does not enumerate the quotient")
    coordinates = {g: coords_of_rep[coset_of[g]] for g in elems}
    return AbelianQuotient(
        invariant_factors=factors,
        coordinates=coordinates,
        generator_images=tuple(coordinates[g] for g in H.generators),
    )


def _factor_pairs(n):
    out = []
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            q = 1
            while m % p == 0:
                m //= p
                q *= p
            out.append((p, q))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, m))
    return out


def _is_p_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def _abelian_p_basis(torsion, qmul, qid, qorder):
    """Basis of an abelian p-group, orders descending, by backtracking."""
    target = len(torsion)
    cands = sorted((x for x in torsion if x != qid), key=lambda x: (-qorder(x), x))

    def extend(span, basis, max_ord):
        if len(span) == target:
            return basis
        for x in cands:
            o = qorder(x)
            if o > max_ord:
                continue
            pows = [qid]
            cur = x
            while cur != qid:
                pows.append(cur)
                cur = qmul[cur, x]
            newspan = {qmul[s, pw] for s in span for pw in pows}
            if len(newspan) == len(span) * o:
                found = extend(newspan, basis + [x], o)
                if found is not None:
                    return found
        return None

    if target <= 1:
        return []
    basis = extend({qid}, [], target)
    if basis is None:
        raise ConsistencyError("no abelian basis found (non-abelian quotient?)")
    return basis


# -- group description files ---------------------------------------------------


@dataclass(frozen=True)
class GroupFile:
    degree: int
    generators: tuple[Permutation, ...]
    augmentation: tuple[int, ...] | None = None  # one sign (+1/-1) per generator
    name: str | None = None


def parse_group_file(text: str, name: str | None = None) -> GroupFile:
    """Parse the group description format.

    Line 1: ``degree N``.  Then ``gen <cycles>`` lines, optionally one
    ``aug <sign per generator>`` line.  Blank lines and ``#`` comments are
    ignored.  Errors name the offending line.
    """
    degree = None
    gens: list[Permutation] = []
    aug: list[int] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split(None, 1)
        keyword = tokens[0]
        rest = tokens[1] if len(tokens) > 1 else ""
        if keyword == "degree":
            if degree is not None:
                raise InputError(f"line {lineno}: duplicate degree line")
            try:
                degree = int(rest)
            except ValueError:
                raise InputError(f"line {lineno}: degree must be an integer") from None
            if degree < 1:
                raise InputError(f"line {lineno}: degree must be positive")
        elif keyword == "gen":
            if degree is None:
                raise InputError(f"line {lineno}: 'gen' before 'degree'")
            try:
                gens.append(parse_cycles(rest, degree))
            except InputError as exc:
                raise InputError(f"line {lineno}: {exc}") from None
        elif keyword == "aug":
            signs = []
            for tok in rest.split():
                if tok in ("+", "+1", "1"):
                    signs.append(1)
                elif tok in ("-", "-1"):
                    signs.append(-1)
                else:
                    raise InputError(f"line {lineno}: bad augmentation sign {tok!r}")
            aug = signs
        else:
            raise InputError(f"line {lineno}: unknown directive {keyword!r}")
    if degree is None:
        raise InputError("missing 'degree' line")
    if aug is not None and len(aug) != len(gens):
        raise InputError("aug line must give one sign per generator")
    return GroupFile(
        degree=degree,
        generators=tuple(gens),
        augmentation=tuple(aug) if aug is not None else None,
        name=name,
    )


def load_group(path, bound: int = DEFAULT_BOUND) -> tuple[PermGroup, GroupFile]:
    from pathlib import Path

    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read group file {path}: {exc}") from exc
    desc = parse_group_file(text, name=p.stem)
    return PermGroup(desc.generators, degree=desc.degree, bound=bound), desc
