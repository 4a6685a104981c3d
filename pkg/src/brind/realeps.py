"""The C2-augmented layer at pi_0: the Burnside ring Z[eps]/(eps^2-1),
augmented groups, and the weak-additivity extension calculus.

A section that is natural but not additive still satisfies

    theta(2x + y) = (1 - a) * theta(x) + theta(y),

where a is the pullback of eps along the augmentation (a = -1 for the
trivial augmentation, a = eps for a surjective one).  That relation is
enough to extend theta from a monoid to its group completion by

    theta(x - y) = theta(x + y) - theta(2y),

and the extension satisfies the same relation.  Extending by
theta(x) - theta(y) instead would NOT be well defined in the surjective
case; `weak_extend` takes the safe route and property-checks the law.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .errors import ConsistencyError, InputError
from .groups import PermGroup, Subgroup
from .perms import identity

__all__ = [
    "EpsScalar",
    "EPS",
    "ONE_MINUS_EPS",
    "EpsModuleElement",
    "AugmentedGroup",
    "MonoidWord",
    "WeakAdditiveMap",
    "ExtendedMap",
    "weak_extend",
    "twist_scalar",
    "transfer_unit",
    "theta_rank_one",
    "rank_one_map",
    "brauer_as_weak_additive",
    "RANK_ONE_LABEL",
]


@dataclass(frozen=True)
class EpsScalar:
    """a + b*eps in Z[eps]/(eps^2 - 1)."""

    a: int = 0
    b: int = 0

    @staticmethod
    def of(x) -> "EpsScalar":
        if isinstance(x, EpsScalar):
            return x
        if isinstance(x, int):
            return EpsScalar(x, 0)
        raise TypeError(f"cannot interpret {type(x).__name__} as an eps-scalar")

    def __add__(self, other):
        other = EpsScalar.of(other)
        return EpsScalar(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return EpsScalar(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-EpsScalar.of(other))

    def __rsub__(self, other):
        return EpsScalar.of(other) + (-self)

    def __mul__(self, other):
        other = EpsScalar.of(other)
        # (a + b e)(c + d e) = (ac + bd) + (ad + bc) e   with e^2 = 1
        return EpsScalar(
            self.a * other.a + self.b * other.b, self.a * other.b + self.b * other.a
        )

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return abs(self.a + self.b) == 1 and abs(self.a - self.b) == 1

    def at_minus_one(self) -> int:
        """Quotient Z[eps]/(eps^2-1) -> Z sending eps to -1."""
        return self.a - self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b}

    @staticmethod
    def from_json(doc) -> "EpsScalar":
        try:
            return EpsScalar(int(doc["a"]), int(doc["b"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed eps-scalar JSON: {exc}") from exc

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        eps = "eps" if abs(self.b) == 1 else f"{abs(self.b)}*eps"
        if self.a == 0:
            return eps if self.b > 0 else f"-{eps}"
        return f"{self.a}{'+' if self.b > 0 else '-'}{eps}"


EPS = EpsScalar(0, 1)
ONE_MINUS_EPS = EpsScalar(1, -1)


class EpsModuleElement:
    """A finitely supported map from labels to eps-scalars."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict):
        clean = {}
        for label in sorted(coeffs, key=lambda l: (type(l).__name__, l)):
            c = EpsScalar.of(coeffs[label])
            if not c.is_zero():
                clean[label] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("EpsModuleElement values are immutable")

    def __add__(self, other):
        out = dict(self.coeffs)
        for label, c in other.coeffs.items():
            out[label] = out.get(label, EpsScalar()) + c
        return EpsModuleElement(out)

    def __sub__(self, other):
        return self + other.scaled(EpsScalar(-1, 0))

    def scaled(self, s) -> "EpsModuleElement":
        s = EpsScalar.of(s)
        return EpsModuleElement({label: s * c for label, c in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def at_minus_one(self) -> dict:
        """Quotient to an integer-coefficient element (eps -> -1)."""
        return {label: c.at_minus_one() for label, c in self.coeffs.items() if c.at_minus_one()}

    def __eq__(self, other):
        return isinstance(other, EpsModuleElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple((str(l), c.a, c.b) for l, c in self.coeffs.items()))

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*{label}" for label, c in self.coeffs.items())

    def to_json(self) -> list:
        return [
            {"label": str(label), "a": c.a, "b": c.b} for label, c in self.coeffs.items()
        ]


class AugmentedGroup:
    """A finite group with a homomorphism to {+1, -1}."""

    def __init__(self, group: PermGroup, generator_signs):
        generator_signs = tuple(int(s) for s in generator_signs)
        if len(generator_signs) != len(group.generators):
            raise InputError("need exactly one sign per generator")
        if any(s not in (1, -1) for s in generator_signs):
            raise InputError("augmentation signs must be +1 or -1")
        signs = {identity(group.degree): 1}
        frontier = [identity(group.degree)]
        while frontier:
            new = []
            for x in frontier:
                sx = signs[x]
                for g, sg in zip(group.generators, generator_signs):
                    y = g * x
                    sy = sg * sx
                    if y in signs:
                        if signs[y] != sy:
                            raise InputError("signs do not extend to a homomorphism")
                    else:
                        signs[y] = sy
                        new.append(y)
            frontier = new
        if len(signs) != group.order:
            raise ConsistencyError("augmentation closure missed elements")
        self.group = group
        self.generator_signs = generator_signs
        self.signs = signs
        self.kernel = group.subgroup_from_elements(
            [x for x, s in signs.items() if s == 1]
        )

    def value(self, p) -> int:
        return self.signs[p]

    @property
    def is_trivial(self) -> bool:
        return self.kernel.order == self.group.order

    @property
    def is_surjective(self) -> bool:
        return not self.is_trivial

    @staticmethod
    def trivial(group: PermGroup) -> "AugmentedGroup":
        return AugmentedGroup(group, [1] * len(group.generators))


def twist_scalar(aug: AugmentedGroup) -> EpsScalar:
    """1 - alpha^*(eps): 2 for trivial augmentations, 1 - eps otherwise."""
    return EpsScalar(2, 0) if aug.is_trivial else ONE_MINUS_EPS


def alpha_pullback_eps(aug: AugmentedGroup) -> EpsScalar:
    """alpha^*(eps): -1 for trivial augmentations, eps for surjective ones."""
    return EpsScalar(-1, 0) if aug.is_trivial else EPS


def transfer_unit(aug: AugmentedGroup) -> EpsScalar:
    """tr(1) = 1 - eps for the order-2 group augmented by the identity."""
    if aug.group.order != 2 or not aug.is_surjective:
        raise InputError(
            "transfer_unit is only defined for the order-2 group with identity augmentation"
        )
    return ONE_MINUS_EPS


class MonoidWord:
    """An element of the free commutative monoid on labeled generators."""

    __slots__ = ("counts",)

    def __init__(self, counts: dict):
        clean = {}
        for label in sorted(counts, key=lambda l: (type(l).__name__, l)):
            c = int(counts[label])
            if c < 0:
                raise InputError("monoid words need nonnegative exponents")
            if c:
                clean[label] = c
        object.__setattr__(self, "counts", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MonoidWord values are immutable")

    def __add__(self, other):
        out = dict(self.counts)
        for label, c in other.counts.items():
            out[label] = out.get(label, 0) + c
        return MonoidWord(out)

    def __rmul__(self, n: int):
        return MonoidWord({label: n * c for label, c in self.counts.items()})

    __mul__ = __rmul__

    def is_zero(self) -> bool:
        return not self.counts

    def key(self):
        return tuple(self.counts.items())

    def __eq__(self, other):
        return isinstance(other, MonoidWord) and self.counts == other.counts

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if not self.counts:
            return "0"
        return " + ".join(f"{c}*{label}" for label, c in self.counts.items())


class WeakAdditiveMap:
    """A map from a free commutative monoid to an eps-module obeying
    theta(2x + y) = twist * theta(x) + theta(y)."""

    def __init__(self, generators, rule, twist: EpsScalar, name: str = "theta"):
        self.generators = tuple(generators)
        self.rule = rule
        self.twist = EpsScalar.of(twist)
        self.name = name
        self._lock = threading.RLock()
        self._values: dict = {}

    def word(self, **counts) -> MonoidWord:
        return MonoidWord(counts)

    def __call__(self, w: MonoidWord) -> EpsModuleElement:
        key = w.key()
        with self._lock:
            if key not in self._values:
                self._values[key] = self.rule(w)
            return self._values[key]


@dataclass(frozen=True)
class ExtendedMap:
    """The group-completion extension theta(x - y) = theta(x+y) - theta(2y)."""

    source: WeakAdditiveMap

    def __call__(self, plus: MonoidWord, minus: MonoidWord) -> EpsModuleElement:
        return self.source(plus + minus) - self.source(2 * minus)

    @property
    def twist(self) -> EpsScalar:
        return self.source.twist


def weak_extend(theta: WeakAdditiveMap, sample_depth: int = 2) -> ExtendedMap:
    """Check the weak-additivity law on a grid, then extend to differences.

    The sampled grid is every pair (x, y) of generator words with total
    exponent at most `sample_depth`; a violation raises an input error
    naming the witness pair.
    """
    words = _words_up_to(theta.generators, sample_depth)
    for x in words:
        tx = theta(x).scaled(theta.twist)
        for y in words:
            lhs = theta(2 * x + y)
            rhs = tx + theta(y)
            if lhs != rhs:
                raise InputError(
                    f"{theta.name} violates weak additivity at x={x!r}, y={y!r}: "
                    f"{lhs} != {rhs}"
                )
    return ExtendedMap(theta)


def _words_up_to(generators, depth: int):
    words = [MonoidWord({})]
    frontier = [MonoidWord({})]
    for _ in range(depth):
        new = []
        for w in frontier:
            for g in generators:
                nw = w + MonoidWord({g: 1})
                if nw not in words:
                    words.append(nw)
                    new.append(nw)
        frontier = new
    return words


# -- the rank-one Real example --------------------------------------------------

RANK_ONE_LABEL = "u"


def theta_rank_one(n: int) -> EpsModuleElement:
    """The unique weak-additive section on the rank-one Real module.

    theta(0) = 0 and theta(1) = 1 force theta(2k) = k(1-eps) and
    theta(2k+1) = k(1-eps) + 1, for every integer n.
    """
    k, r = divmod(n, 2)
    coeff = ONE_MINUS_EPS * k + (1 if r else 0)
    return EpsModuleElement({RANK_ONE_LABEL: coeff})


def rank_one_map() -> WeakAdditiveMap:
    """theta on the monoid N of Real representations of rank n."""

    def rule(w: MonoidWord) -> EpsModuleElement:
        return theta_rank_one(w.counts.get(RANK_ONE_LABEL, 0))

    return WeakAdditiveMap((RANK_ONE_LABEL,), rule, twist=ONE_MINUS_EPS, name="theta_rank_one")


# -- the Brauer section as a weak-additive map -----------------------------------


def brauer_as_weak_additive(G: PermGroup) -> WeakAdditiveMap:
    """b_G wrapped over the monoid of honest characters (trivial augmentation).

    The twist is 2, so the weak-additivity law collapses to additivity and
    the extension coincides with the additive extension of b_G to R(G).
    """
    from .characters import character_table
    from .monomial import brauer_induction

    table = character_table(G)
    k = len(table.irreducibles)
    labels = tuple(f"chi{i}" for i in range(k))

    def rule(w: MonoidWord) -> EpsModuleElement:
        coords = [w.counts.get(f"chi{i}", 0) for i in range(k)]
        element = brauer_induction(table.virtual(coords))
        return EpsModuleElement({idx: EpsScalar(c, 0) for idx, c in element.coeffs.items()})

    return WeakAdditiveMap(labels, rule, twist=EpsScalar(2, 0), name=f"b (order {G.order})")
