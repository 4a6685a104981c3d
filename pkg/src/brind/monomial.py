"""The monomial module A(T,G) and the explicit Brauer induction section.

A(T,G) is free abelian on conjugacy classes of pairs [H, chi] with H a
subgroup and chi a linear character of H.  Evaluation sends [H, chi] to
the induced character Ind_H^G(chi); the section b_G computed here splits
evaluation: ev(b_G(x)) = x for every virtual character x.

The coefficient of b_G at an orbit representative (H, phi) of an honest
character V is the internal Euler characteristic of the open stratum of
the projective space P(V) with isotropy exactly (H, phi):

    alpha_(H,phi)(V) =
        (1/[N_G(H,phi):H]) * sum_{(K,psi) >= (H,phi)} mu((H,phi),(K,psi)) * <Res_K V, psi>

where the sum runs over actual pairs (not orbits) above (H, phi) and
N_G(H,phi) is the stabilizer of the pair in N_G(H).  The closed stratum
for (K, psi) is a projective space whose Euler characteristic is the
multiplicity <Res_K V, psi>; Moebius inversion cuts out the open stratum,
and the free action of N_G(H,phi)/H on it makes alpha an integer.
Virtual characters are handled by additivity.  The formula is certified
by the section, line, naturality and integrality checks, not trusted.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from .characters import (
    ClassFunction,
    LinearCharacter,
    VirtualCharacter,
    character_table,
    induce,
    linear_characters,
)
from .errors import ConsistencyError, InputError
from .groups import PermGroup, Subgroup, double_cosets, normalizer
from .perms import cycle_string

__all__ = [
    "MonomialPair",
    "PairPoset",
    "MonomialElement",
    "pair_poset",
    "moebius",
    "brauer_induction",
    "evaluate",
    "restrict_monomial",
    "check_section",
    "SectionReport",
]


@dataclass(frozen=True)
class MonomialPair:
    """A pair [H, chi]: a subgroup with a linear character on it."""

    subgroup: Subgroup
    character: LinearCharacter
    index: int  # position in the ambient poset

    def key(self):
        return (self.subgroup.order, self.subgroup.key, self.character.key())

    def label(self) -> str:
        gens = ",".join(cycle_string(g) for g in self.subgroup.generators) or "()"
        vals = ",".join(str(self.character.value(g)) for g in self.subgroup.generators)
        return f"[{gens}; {vals}]" if vals else f"[{gens}; 1]"


class PairPoset:
    """All pairs (H, chi) of a group, ordered by containment + restriction.

    (H, phi) <= (K, psi) iff H <= K and psi restricted to H equals phi.
    Conjugation acts on pairs; orbit representatives index the basis of
    A(T,G).  Moebius values are memoized per interval.
    """

    def __init__(self, group: PermGroup):
        self.group = group
        self.subgroups = group.all_subgroups
        self._sub_index = {s.element_set: i for i, s in enumerate(self.subgroups)}
        self.characters = tuple(linear_characters(H) for H in self.subgroups)
        self._char_index = [
            {chi.key(): ci for ci, chi in enumerate(chars)} for chars in self.characters
        ]
        self.pairs: list[MonomialPair] = []
        self._offsets: list[int] = []
        for si, H in enumerate(self.subgroups):
            self._offsets.append(len(self.pairs))
            for chi in self.characters[si]:
                self.pairs.append(MonomialPair(H, chi, index=len(self.pairs)))
        n = len(self.pairs)
        self._leq = [[False] * n for _ in range(n)]
        for a in self.pairs:
            for b in self.pairs:
                if a.subgroup.element_set <= b.subgroup.element_set and all(
                    b.character.value(x) == a.character.value(x)
                    for x in a.subgroup.element_set
                ):
                    self._leq[a.index][b.index] = True
        self.uppers = [
            tuple(j for j in range(n) if self._leq[i][j]) for i in range(n)
        ]
        self._orbits()
        self._mu_cache: dict[tuple[int, int], int] = {}
        self._lock = threading.RLock()
        self._brauer_cache: dict[int, MonomialElement] = {}
        self._induced_cache: dict[int, ClassFunction] = {}
        self._pair_norm_index: dict[int, int] = {}

    def _orbits(self):
        n = len(self.pairs)
        self.orbit_of = [-1] * n
        self.orbit_reps: list[int] = []
        assigned = [False] * n
        for start in range(n):
            if assigned[start]:
                continue
            orbit = {start}
            frontier = [start]
            while frontier:
                new = []
                for idx in frontier:
                    for g in self.group.generators:
                        img = self.conjugate_pair(idx, g)
                        if img not in orbit:
                            orbit.add(img)
                            new.append(img)
                frontier = new
            rep = min(orbit, key=lambda i: self.pairs[i].key())
            self.orbit_reps.append(rep)
            for idx in orbit:
                assigned[idx] = True
                self.orbit_of[idx] = rep
        self.orbit_reps.sort(key=lambda i: self.pairs[i].key())

    def conjugate_pair(self, idx: int, g) -> int:
        pair = self.pairs[idx]
        new_char = pair.character.conjugated(g)
        si = self._sub_index[new_char.subgroup.element_set]
        ci = self._char_index[si][new_char.key()]
        return self.pair_index(si, ci)

    def pair_index(self, si: int, ci: int) -> int:
        # pairs are listed subgroup-major in construction order
        return self._offsets[si] + ci

    def leq(self, a: int, b: int) -> bool:
        return self._leq[a][b]

    def moebius(self, lower: int, upper: int) -> int:
        if not self._leq[lower][upper]:
            raise InputError("moebius requires comparable pairs (lower <= upper)")
        with self._lock:
            return self._moebius(lower, upper)

    def _moebius(self, lower: int, upper: int) -> int:
        if lower == upper:
            return 1
        key = (lower, upper)
        if key not in self._mu_cache:
            total = 0
            for mid in self.uppers[lower]:
                if mid != upper and self._leq[mid][upper]:
                    total += self._moebius(lower, mid)
            self._mu_cache[key] = -total
        return self._mu_cache[key]

    def pair_normalizer_index(self, idx: int) -> int:
        """[N_G(H,phi) : H] for the pair at idx."""
        with self._lock:
            if idx not in self._pair_norm_index:
                pair = self.pairs[idx]
                H = pair.subgroup
                stab = [
                    g
                    for g in normalizer(self.group, H).element_set
                    if all(
                        pair.character.value(g.inverse() * x * g) == pair.character.value(x)
                        for x in H.element_set
                    )
                ]
                if len(stab) % H.order != 0:
                    raise ConsistencyError("pair stabilizer does not contain the subgroup")
                self._pair_norm_index[idx] = len(stab) // H.order
            return self._pair_norm_index[idx]

    def induced_character(self, idx: int) -> ClassFunction:
        with self._lock:
            if idx not in self._induced_cache:
                pair = self.pairs[idx]
                self._induced_cache[idx] = induce(
                    pair.subgroup, pair.character.as_class_function(), self.group
                )
            return self._induced_cache[idx]


def pair_poset(G: PermGroup) -> PairPoset:
    with G._lock:
        if "pair_poset" not in G._cache:
            G._cache["pair_poset"] = PairPoset(G)
        return G._cache["pair_poset"]


def moebius(poset: PairPoset, lower: MonomialPair, upper: MonomialPair) -> int:
    return poset.moebius(lower.index, upper.index)


class MonomialElement:
    """An integer combination of orbit representatives [H, chi]."""

    __slots__ = ("poset", "coeffs")

    def __init__(self, poset: PairPoset, coeffs: dict[int, int]):
        clean = {}
        for idx, c in sorted(coeffs.items()):
            if c:
                if poset.orbit_of[idx] != idx:
                    raise ConsistencyError("monomial element keyed by a non-representative pair")
                clean[idx] = int(c)
        object.__setattr__(self, "poset", poset)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MonomialElement values are immutable")

    def _same_space(self, other):
        if not isinstance(other, MonomialElement) or other.poset is not self.poset:
            raise InputError("monomial elements live on different groups")

    def __add__(self, other):
        self._same_space(other)
        out = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            out[idx] = out.get(idx, 0) + c
        return MonomialElement(self.poset, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return MonomialElement(self.poset, {i: -c for i, c in self.coeffs.items()})

    def __rmul__(self, n: int):
        return MonomialElement(self.poset, {i: n * c for i, c in self.coeffs.items()})

    __mul__ = __rmul__

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, MonomialElement)
            and self.poset is other.poset
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.poset), tuple(sorted(self.coeffs.items()))))

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for idx, c in self.coeffs.items():
            label = self.poset.pairs[idx].label()
            sign = "-" if c < 0 else ("+" if terms else "")
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            terms.append(f"{sign}{mag}{label}")
        return " ".join(terms)

    __repr__ = __str__

    def to_json(self) -> list:
        out = []
        for idx, c in self.coeffs.items():
            pair = self.poset.pairs[idx]
            out.append(
                {
                    "subgroup_order": pair.subgroup.order,
                    "subgroup_generators": [cycle_string(g) for g in pair.subgroup.generators],
                    "character_on_generators": [
                        str(pair.character.value(g)) for g in pair.subgroup.generators
                    ],
                    "coefficient": c,
                }
            )
        return out


def _brauer_of_irreducible(poset: PairPoset, irr_index: int) -> MonomialElement:
    with poset._lock:
        if irr_index in poset._brauer_cache:
            return poset._brauer_cache[irr_index]
    G = poset.group
    V = character_table(G).irreducibles[irr_index]
    element = _brauer_of_honest(poset, V)
    with poset._lock:
        poset._brauer_cache[irr_index] = element
    return element


def _brauer_of_honest(poset: PairPoset, V: ClassFunction) -> MonomialElement:
    G = poset.group
    mult: list[int] = []
    for pair in poset.pairs:
        total = None
        for x in pair.subgroup.element_set:
            term = V.value_at(x) * pair.character.value(x).conj()
            total = term if total is None else total + term
        m = (total * Fraction(1, pair.subgroup.order)).as_integer()
        if m is None or m < 0:
            raise ConsistencyError("non-integral restriction multiplicity")
        mult.append(m)
    coeffs: dict[int, int] = {}
    for rep in poset.orbit_reps:
        acc = 0
        for upper in poset.uppers[rep]:
            if mult[upper]:
                acc += poset.moebius(rep, upper) * mult[upper]
        if acc == 0:
            continue
        w = poset.pair_normalizer_index(rep)
        if acc % w != 0:
            raise ConsistencyError(
                f"Brauer coefficient {acc}/{w} at {poset.pairs[rep].label()} is not integral"
            )
        coeffs[rep] = acc // w
    return MonomialElement(poset, coeffs)


def brauer_induction(x: VirtualCharacter) -> MonomialElement:
    """The explicit Brauer induction b_G(x), extended additively to R(G)."""
    poset = pair_poset(x.group)
    total = MonomialElement(poset, {})
    for i, c in enumerate(x.coords):
        if c:
            total = total + c * _brauer_of_irreducible(poset, i)
    return total


def brauer_induction_of_character(V: ClassFunction) -> MonomialElement:
    """b_G applied directly to an honest character via the stratification."""
    table = character_table(V.group)
    coords = table.integer_coordinates(V)
    if any(c < 0 for c in coords):
        raise InputError("direct stratification needs an honest character")
    return _brauer_of_honest(pair_poset(V.group), V)


def evaluate(m: MonomialElement) -> VirtualCharacter:
    """Evaluation A(T,G) -> R(G): [H, chi] -> Ind_H^G(chi), extended linearly."""
    poset = m.poset
    G = poset.group
    table = character_table(G)
    total = ClassFunction(G, [0] * len(G.conjugacy_classes))
    for idx, c in m.coeffs.items():
        total = total + poset.induced_character(idx) * c
    return table.from_class_function(total)


def restrict_monomial(m: MonomialElement, H: Subgroup) -> MonomialElement:
    """Mackey restriction of A(T,G) to A(T,H) by the double-coset formula."""
    G = m.poset.group
    if H.parent is not G:
        raise InputError("restriction target must be a subgroup of the element's group")
    HG = H.as_group()
    target = pair_poset(HG)
    out: dict[int, int] = {}
    for idx, c in m.coeffs.items():
        pair = m.poset.pairs[idx]
        K = pair.subgroup
        for dc in double_cosets(G, H, K):
            g = dc.representative
            conj_char = pair.character.conjugated(g)  # lives on gKg^-1
            meet = dc.intersection.element_set  # H meet gKg^-1
            sub = HG.subgroup_from_elements(meet)
            chi = LinearCharacter(sub, {x: conj_char.value(x) for x in meet})
            si = target._sub_index[sub.element_set]
            ci = target._char_index[si][chi.key()]
            rep = target.orbit_of[target.pair_index(si, ci)]
            out[rep] = out.get(rep, 0) + c
    return MonomialElement(target, out)


@dataclass(frozen=True)
class SectionReport:
    group_order: int
    lines: tuple[tuple[str, bool], ...]

    @property
    def ok(self) -> bool:
        return all(flag for _name, flag in self.lines)


def check_section(G: PermGroup) -> SectionReport:
    """Verify ev(b_G(chi)) = chi for every irreducible character of G."""
    table = character_table(G)
    lines = []
    for i in range(len(table.irreducibles)):
        x = table.virtual([1 if j == i else 0 for j in range(len(table.irreducibles))])
        ok = evaluate(brauer_induction(x)) == x
        lines.append((f"ev(b(chi_{i})) = chi_{i}", ok))
    return SectionReport(group_order=G.order, lines=tuple(lines))
