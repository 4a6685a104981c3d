"""Exact class functions, character tables, induction and restriction.

Character tables are computed by Dixon's modular method: simultaneous
eigenvectors of the class-multiplication matrices over a prime field F_p
with p = 1 (mod exponent) and p > 2*sqrt(|G|), lifted to exact cyclotomic
values through the correspondence between mu_e in F_p* and zeta_e.  An
independent brute-force oracle (`regular_decomposition_irreducibles`)
recovers the same table from induced linear characters alone and is used
by the verification suites.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import isqrt

from .cyclotomic import Cyclotomic, rational, zeta
from .errors import CapacityError, ConsistencyError, InputError
from .groups import PermGroup, Subgroup, abelianization
from .perms import Permutation

__all__ = [
    "ClassFunction",
    "CharacterTable",
    "VirtualCharacter",
    "LinearCharacter",
    "character_table",
    "inner_product",
    "induce",
    "restrict",
    "linear_characters",
    "tensor",
    "trivial_character",
    "regular_character",
    "regular_decomposition_irreducibles",
]

_ZERO = rational(0)
_ONE = rational(1)


class ClassFunction:
    """A function on conjugacy classes with exact cyclotomic values."""

    __slots__ = ("group", "values")

    def __init__(self, group: PermGroup, values):
        values = tuple(Cyclotomic._coerce(v) for v in values)
        if len(values) != len(group.conjugacy_classes):
            raise InputError("value count does not match the number of classes")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("ClassFunction values are immutable")

    def value_at(self, p: Permutation) -> Cyclotomic:
        return self.values[self.group.class_index(p)]

    def degree(self) -> Cyclotomic:
        return self.values[0]

    def __add__(self, other):
        self._same_group(other)
        return ClassFunction(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        self._same_group(other)
        return ClassFunction(self.group, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return ClassFunction(self.group, [-a for a in self.values])

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            self._same_group(other)
            return ClassFunction(self.group, [a * b for a, b in zip(self.values, other.values)])
        return ClassFunction(self.group, [a * other for a in self.values])

    __rmul__ = __mul__

    def conj(self) -> "ClassFunction":
        return ClassFunction(self.group, [a.conj() for a in self.values])

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def _same_group(self, other):
        if not isinstance(other, ClassFunction) or other.group is not self.group:
            raise InputError("class functions live on different groups")

    def key(self):
        return tuple(v.key() for v in self.values)

    def __eq__(self, other):
        return (
            isinstance(other, ClassFunction)
            and self.group is other.group
            and self.values == other.values
        )

    def __hash__(self):
        return hash((id(self.group), self.values))

    def __repr__(self):
        return f"ClassFunction([{', '.join(str(v) for v in self.values)}])"


def trivial_character(G: PermGroup) -> ClassFunction:
    return ClassFunction(G, [_ONE] * len(G.conjugacy_classes))

def regular_character(G: PermGroup) -> ClassFunction:
    values = [rational(G.order)] + [_ZERO] * (len(G.conjugacy_classes) - 1)
    return ClassFunction(G, values)


def inner_product(a: ClassFunction, b: ClassFunction) -> Cyclotomic:
    """(1/|G|) sum over classes of size * a(g) * conj(b(g))."""
    a._same_group(b)
    total = _ZERO
    for cls, va, vb in zip(a.group.conjugacy_classes, a.values, b.values):
        total = total + va * vb.conj() * cls.size
    return total * Fraction(1, a.group.order)


def induce(H: Subgroup, f: ClassFunction, G: PermGroup) -> ClassFunction:
    """Standard induced class function from H <= G."""
    if H.parent is not G:
        raise InputError("induce requires a subgroup of the target group")
    HG = H.as_group()
    if f.group is not HG:
        raise InputError("class function is not defined on the given subgroup")
    scale = Fraction(1, H.order)
    values = []
    for cls in G.conjugacy_classes:
        t = cls.representative
        total = _ZERO
        for x in G.elements:
            y = x.inverse() * t * x
            if y in H.element_set:
                total = total + f.values[HG.class_index(y)]
        values.append(total * scale)
    return ClassFunction(G, values)


def restrict(f: ClassFunction, H: Subgroup) -> ClassFunction:
    """Restriction along H <= G; values are evaluated on H's classes."""
    if f.group is not H.parent:
        raise InputError("restrict requires a subgroup of the function's group")
    HG = H.as_group()
    return ClassFunction(HG, [f.value_at(c.representative) for c in HG.conjugacy_classes])


class LinearCharacter:
    """A 1-dimensional character of a subgroup, stored as its value map."""

    __slots__ = ("subgroup", "values", "exponents")

    def __init__(self, subgroup: Subgroup, values: dict, exponents=None):
        object.__setattr__(self, "subgroup", subgroup)
        object.__setattr__(self, "values", dict(values))
        object.__setattr__(self, "exponents", exponents)

    def __setattr__(self, name, value):
        raise AttributeError("LinearCharacter values are immutable")

    def value(self, p: Permutation) -> Cyclotomic:
        return self.values[p]

    def is_trivial(self) -> bool:
        return all(v == _ONE for v in self.values.values())

    def key(self):
        return tuple(self.values[p].key() for p in self.subgroup.elements)

    def restricted_to(self, K: Subgroup) -> "LinearCharacter":
        if not self.subgroup.contains(K):
            raise InputError("restriction target is not a subgroup")
        return LinearCharacter(K, {p: self.values[p] for p in K.element_set})

    def conjugated(self, g: Permutation) -> "LinearCharacter":
        """The character x -> value(g^-1 x g) on the conjugated subgroup."""
        ginv = g.inverse()
        new_sub = self.subgroup.conjugated(g)
        return LinearCharacter(new_sub, {p: self.values[ginv * p * g] for p in new_sub.element_set})

    def __mul__(self, other: "LinearCharacter") -> "LinearCharacter":
        if other.subgroup.element_set != self.subgroup.element_set:
            raise InputError("linear characters live on different subgroups")
        return LinearCharacter(
            self.subgroup, {p: self.values[p] * other.values[p] for p in self.values}
        )

    def conj(self) -> "LinearCharacter":
        return LinearCharacter(self.subgroup, {p: v.conj() for p, v in self.values.items()})

    def as_class_function(self) -> ClassFunction:
        HG = self.subgroup.as_group()
        return ClassFunction(HG, [self.values[c.representative] for c in HG.conjugacy_classes])

    def __eq__(self, other):
        return (
            isinstance(other, LinearCharacter)
            and self.subgroup.element_set == other.subgroup.element_set
            and self.values == other.values
        )

    def __hash__(self):
        return hash(
            (self.subgroup.element_set, tuple(sorted((p.images, v.key()) for p, v in self.values.items())))
        )

    def __repr__(self):
        return f"LinearCharacter(order {self.subgroup.order} subgroup, exponents={self.exponents})"


def linear_characters(H: Subgroup) -> tuple[LinearCharacter, ...]:
    """All |H/[H,H]| linear characters, trivial first, in a canonical order."""
    with H._lock:
        if "linear_characters" in H._cache:
            return H._cache["linear_characters"]
        ab = abelianization(H)
        chars = []
        for expo in product(*(range(d) for d in ab.invariant_factors)):
            values = {}
            for p, coords in ab.coordinates.items():
                v = _ONE
                for d, t, c in zip(ab.invariant_factors, expo, coords):
                    if (t * c) % d:
                        v = v * zeta(d, t * c)
                values[p] = v
            chars.append(LinearCharacter(H, values, exponents=expo))
        H._cache["linear_characters"] = tuple(chars)
        return H._cache["linear_characters"]


class CharacterTable:
    """The irreducible characters of a group, trivial first, degree-sorted."""

    def __init__(self, group: PermGroup, irreducibles):
        self.group = group
        self.irreducibles = tuple(irreducibles)
        self.degrees = tuple(chi.degree().as_integer() for chi in self.irreducibles)
        if any(d is None or d < 1 for d in self.degrees):
            raise ConsistencyError("irreducible degrees must be positive integers")

    def decompose(self, f: ClassFunction) -> tuple[Cyclotomic, ...]:
        return tuple(inner_product(f, chi) for chi in self.irreducibles)

    def integer_coordinates(self, f: ClassFunction) -> tuple[int, ...]:
        coords = []
        for c in self.decompose(f):
            n = c.as_integer()
            if n is None:
                raise ConsistencyError(f"non-integral irreducible coordinate {c}")
            coords.append(n)
        return tuple(coords)

    def virtual(self, coords) -> "VirtualCharacter":
        return VirtualCharacter(self, tuple(int(c) for c in coords))

    def from_class_function(self, f: ClassFunction) -> "VirtualCharacter":
        coords = self.integer_coordinates(f)
        if VirtualCharacter(self, coords).as_class_function() != f:
            raise ConsistencyError("class function is not a virtual character")
        return VirtualCharacter(self, coords)

    def row_orthogonality_ok(self) -> bool:
        for i, a in enumerate(self.irreducibles):
            for j, b in enumerate(self.irreducibles):
                if inner_product(a, b) != (1 if i == j else 0):
                    return False
        return True

    def column_orthogonality_ok(self) -> bool:
        classes = self.group.conjugacy_classes
        for i, ci in enumerate(classes):
            for j in range(len(classes)):
                total = _ZERO
                for chi in self.irreducibles:
                    total = total + chi.values[i] * chi.values[j].conj()
                expected = Fraction(self.group.order, ci.size) if i == j else 0
                if total != expected:
                    return False
        return True

    def to_json(self) -> dict:
        G = self.group
        power_ns = sorted({-1} | {p for p, _ in _prime_powers(G.exponent)})
        return {
            "group_hash": G.structure_hash,
            "order": G.order,
            "class_sizes": [c.size for c in G.conjugacy_classes],
            "class_representatives": [
                " ".join(map(str, c.representative.images)) for c in G.conjugacy_classes
            ],
            "power_maps": {str(n): list(G.power_classes(n)) for n in power_ns},
            "degrees": list(self.degrees),
            "irreducibles": [[v.to_json() for v in chi.values] for chi in self.irreducibles],
        }

    @staticmethod
    def from_json(doc: dict, group: PermGroup) -> "CharacterTable":
        try:
            if doc["group_hash"] != group.structure_hash:
                raise InputError("character table JSON belongs to a different group")
            rows = [
                ClassFunction(group, [Cyclotomic.from_json(v) for v in row])
                for row in doc["irreducibles"]
            ]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed character table JSON: {exc}") from exc
        table = CharacterTable(group, rows)
        if not table.row_orthogonality_ok():
            raise InputError("imported character table fails orthogonality")
        return table


class VirtualCharacter:
    """An element of R(G): integer coordinates over the irreducible basis."""

    __slots__ = ("table", "coords")

    def __init__(self, table: CharacterTable, coords):
        coords = tuple(int(c) for c in coords)
        if len(coords) != len(table.irreducibles):
            raise InputError("coordinate count does not match the irreducible count")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("VirtualCharacter values are immutable")

    @property
    def group(self) -> PermGroup:
        return self.table.group

    def as_class_function(self) -> ClassFunction:
        out = ClassFunction(self.group, [_ZERO] * len(self.group.conjugacy_classes))
        for c, chi in zip(self.coords, self.table.irreducibles):
            if c:
                out = out + chi * c
        return out

    def is_honest(self) -> bool:
        return all(c >= 0 for c in self.coords)

    def __add__(self, other):
        self._check(other)
        return VirtualCharacter(self.table, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check(other)
        return VirtualCharacter(self.table, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return VirtualCharacter(self.table, [-a for a in self.coords])

    def __rmul__(self, n: int):
        return VirtualCharacter(self.table, [n * a for a in self.coords])

    __mul__ = __rmul__

    def _check(self, other):
        if not isinstance(other, VirtualCharacter) or other.table is not self.table:
            raise InputError("virtual characters live on different tables")

    def __eq__(self, other):
        return (
            isinstance(other, VirtualCharacter)
            and self.table is other.table
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((id(self.table), self.coords))

    def __repr__(self):
        return f"VirtualCharacter{self.coords}"


def tensor(a: VirtualCharacter, b: VirtualCharacter) -> VirtualCharacter:
    """Pointwise product of class functions, decomposed back to R(G)."""
    a._check(b)
    return a.table.from_class_function(a.as_class_function() * b.as_class_function())


# -- Dixon's modular algorithm -------------------------------------------------


def character_table(G: PermGroup, bound: int | None = None) -> CharacterTable:
    """Complete irreducible character table with exact cyclotomic values."""
    cap = bound if bound is not None else G.bound
    if G.order > cap:
        raise CapacityError("character table requires order <= bound", cap)
    with G._lock:
        if "character_table" not in G._cache:
            G._cache["character_table"] = _dixon_table(G)
        return G._cache["character_table"]


def _dixon_table(G: PermGroup) -> CharacterTable:
    classes = G.conjugacy_classes
    k = len(classes)
    e = G.exponent
    p = _dixon_prime(e, G.order)
    members: list[list[Permutation]] = [[] for _ in range(k)]
    for g in G.elements:
        members[G.class_index(g)].append(g)

    # class-multiplication coefficients a[i][j][l]: C_i * C_j = sum a * C_l
    a = [[[0] * k for _ in range(k)] for _ in range(k)]
    for i in range(k):
        for l in range(k):
            rep_l = classes[l].representative
            for x in members[i]:
                j = G.class_index(x.inverse() * rep_l)
                a[i][j][l] += 1

    # matrices N_i[j][l] = a[i][j][l]; common eigenvectors over F_p
    mats = [[[a[i][j][l] % p for l in range(k)] for j in range(k)] for i in range(k)]
    spaces = [_identity_basis(k, p)]
    for i in range(1, k):
        if all(len(s) == 1 for s in spaces):
            break
        spaces = [part for s in spaces for part in _split_eigenspaces(mats[i], s, p)]
    if any(len(s) != 1 for s in spaces):
        raise ConsistencyError("class-sum matrices did not split into lines")

    inv_sizes = [pow(c.size, -1, p) for c in classes]
    inv_classes = G.inverse_classes()
    rows = []
    for space in spaces:
        w = space[0]
        if w[0] % p == 0:
            raise ConsistencyError("central character vanishes on the identity class")
        norm = pow(w[0], -1, p)
        omega = [(x * norm) % p for x in w]
        denom = 0
        for j in range(k):
            denom = (denom + omega[j] * omega[inv_classes[j]] * inv_sizes[j]) % p
        d2 = (G.order * pow(denom, -1, p)) % p
        d = next((x for x in range(1, isqrt(G.order) + 1) if (x * x) % p == d2), None)
        if d is None:
            raise ConsistencyError("no integral degree matches the central character")
        chi_mod = [(d * omega[j] * inv_sizes[j]) % p for j in range(k)]
        rows.append(_lift_character(G, chi_mod, d, e, p))

    if len(rows) != k or sum(chi.values[0].as_integer() ** 2 for chi in rows) != G.order:
        raise ConsistencyError("Dixon table has wrong degrees")
    rows.sort(key=lambda chi: (chi.values[0].as_integer(), chi.key()))
    triv = trivial_character(G)
    rows = [triv] + [chi for chi in rows if chi != triv]
    table = CharacterTable(G, rows)
    if not (table.row_orthogonality_ok() and table.column_orthogonality_ok()):
        raise ConsistencyError("Dixon table fails orthogonality")
    return table


def _dixon_prime(e: int, order: int) -> int:
    floor = 2 * isqrt(order) + 1
    p = e + 1
    while True:
        if p > floor and _is_prime(p) and (p - 1) % e == 0:
            return p
        p += e


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _primitive_root(p: int) -> int:
    factors = [q for q, _ in _prime_powers(p - 1)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ConsistencyError(f"no primitive root modulo {p}")


def _prime_powers(n: int):
    out = []
    m, q = n, 2
    while q * q <= m:
        if m % q == 0:
            pk = 1
            while m % q == 0:
                m //= q
                pk *= q
            out.append((q, pk))
        q += 1
    if m > 1:
        out.append((m, m))
    return out


def _lift_character(G: PermGroup, chi_mod, degree: int, e: int, p: int) -> ClassFunction:
    z = pow(_primitive_root(p), (p - 1) // e, p)
    values = []
    for cls in G.conjugacy_classes:
        rep = cls.representative
        o = rep.order()
        zo = pow(z, e // o, p)
        inv_o = pow(o, -1, p)
        powers = []
        cur = rep**0
        for _s in range(o):
            powers.append(G.class_index(cur))
            cur = cur * rep
        val = _ZERO
        total = 0
        for t in range(o):
            m = 0
            for s in range(o):
                m = (m + chi_mod[powers[s]] * pow(zo, (-s * t) % o, p)) % p
            m = (m * inv_o) % p
            if m:
                total += m
                val = val + m * zeta(o, t)
        if total != degree:
            raise ConsistencyError("eigenvalue multiplicities do not sum to the degree")
        values.append(val)
    chi = ClassFunction(G, values)
    if chi.values[0] != degree:
        raise ConsistencyError("lifted character has wrong degree")
    return chi


def _identity_basis(k: int, p: int):
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


def _mat_vec(mat, vec, p):
    return [sum(row[j] * vec[j] for j in range(len(vec))) % p for row in mat]


def _split_eigenspaces(mat, basis, p):
    """Split span(basis) into eigenspaces of mat restricted to it."""
    dim = len(basis)
    if dim == 1:
        return [basis]
    images = [_mat_vec(mat, b, p) for b in basis]
    restricted = _coords_in_basis(images, basis, p)  # rows: images in basis coords
    parts = []
    found = 0
    for lam in range(p):
        shifted = [
            [(restricted[i][j] - (lam if i == j else 0)) % p for j in range(dim)]
            for i in range(dim)
        ]
        kernel = _nullspace(_transpose(shifted), p)
        if kernel:
            vectors = [
                [sum(c * basis[i][j] for i, c in enumerate(coeffs)) % p for j in range(len(basis[0]))]
                for coeffs in kernel
            ]
            parts.append(vectors)
            found += len(kernel)
            if found == dim:
                break
    if found != dim:
        raise ConsistencyError("class-sum matrix is not diagonalizable over F_p")
    return parts


def _transpose(mat):
    return [list(col) for col in zip(*mat)]


def _coords_in_basis(vectors, basis, p):
    """Coordinates of each vector in span(basis); exact solve over F_p."""
    rows = len(basis)
    cols = len(basis[0])
    aug = [[basis[i][j] for i in range(rows)] for j in range(cols)]  # cols x rows
    out = []
    for vec in vectors:
        sol = _solve(aug, [vec[j] for j in range(cols)], p)
        if sol is None:
            raise ConsistencyError("vector does not lie in the invariant subspace")
        out.append(sol)
    return out


def _solve(mat, rhs, p):
    """Solve mat * x = rhs over F_p (mat given as list of rows)."""
    m = [row[:] + [b] for row, b in zip(mat, rhs)]
    rows, cols = len(m), len(mat[0])
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] % p), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    for i in range(r, rows):
        if m[i][cols] % p:
            return None
    sol = [0] * cols
    for i, c in enumerate(pivots):
        sol[c] = m[i][cols]
    return sol


def _nullspace(mat, p):
    """Basis of the right nullspace of mat over F_p."""
    rows, cols = len(mat), len(mat[0])
    m = [row[:] for row in mat]
    pivots = {}
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] % p), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots[c] = r
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * cols
        vec[fc] = 1
        for c, row in pivots.items():
            vec[c] = (-m[row][fc]) % p
        basis.append(vec)
    return basis


# -- independent oracle ---------------------------------------------------------


def regular_decomposition_irreducibles(G: PermGroup) -> tuple[ClassFunction, ...]:
    """Recover all irreducibles from induced linear characters alone.

    Brute-force oracle: gather Ind_H^G(lambda) over all subgroup classes H
    and linear lambda, peel off norm-1 characters, subtract known
    constituents, and take tensor products when the pool runs dry.  The
    result decomposes the regular character exactly; raises if the group
    is out of reach (not an issue at corpus scale).
    """
    k = len(G.conjugacy_classes)
    pool: list[ClassFunction] = []
    for H in G.subgroup_classes:
        for lam in linear_characters(H):
            pool.append(induce(H, lam.as_class_function(), G))
    found: dict = {}

    def consider(cf: ClassFunction):
        for chi in list(found.values()):
            m = inner_product(cf, chi).as_integer()
            if m is None:
                raise ConsistencyError("non-integral multiplicity in oracle")
            if m:
                cf = cf - chi * m
        if cf.is_zero():
            return
        if inner_product(cf, cf) == 1:
            found.setdefault(cf.key(), cf)

    for cf in pool:
        consider(cf)
    while len(found) < k:
        before = len(found)
        extended = [a * b for a in list(found.values()) for b in list(found.values())]
        for cf in extended + pool:
            consider(cf)
        if len(found) == before:
            raise ConsistencyError("oracle could not complete the character table")
    reg = regular_character(G)
    total = ClassFunction(G, [_ZERO] * k)
    for chi in found.values():
        d = inner_product(reg, chi).as_integer()
        if d != chi.values[0].as_integer():
            raise ConsistencyError("regular character multiplicity mismatch")
        total = total + chi * d
    if total != reg:
        raise ConsistencyError("oracle irreducibles do not decompose the regular character")
    rows = sorted(found.values(), key=lambda chi: (chi.values[0].as_integer(), chi.key()))
    triv = trivial_character(G)
    return tuple([triv] + [chi for chi in rows if chi != triv])
