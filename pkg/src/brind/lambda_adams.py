"""Adams and lambda operations on R(G) at the character level.

Adams operations act by power maps on conjugacy classes,
(psi^n x)(g) = x(g^n).  Exterior and symmetric powers are recovered from
them through Newton's identities; the intermediate values are rational
and the integrality of the final coordinates is asserted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .characters import CharacterTable, ClassFunction, VirtualCharacter, character_table
from .errors import InputError
from .groups import PermGroup

__all__ = ["LambdaContext", "adams", "lambda_op", "sym_op", "adams_on_class_function"]


@dataclass(frozen=True)
class LambdaContext:
    """Bundles a group with its table; power maps are cached on the group."""

    group: PermGroup
    table: CharacterTable

    @staticmethod
    def for_group(G: PermGroup) -> "LambdaContext":
        return LambdaContext(group=G, table=character_table(G))

    def adams(self, n: int, x: VirtualCharacter) -> VirtualCharacter:
        return adams(n, x)

    def lambda_op(self, k: int, x: VirtualCharacter) -> VirtualCharacter:
        return lambda_op(k, x)

    def sym_op(self, k: int, x: VirtualCharacter) -> VirtualCharacter:
        return sym_op(k, x)


def adams_on_class_function(n: int, f: ClassFunction) -> ClassFunction:
    if n < 1:
        raise InputError("Adams operations are defined for n >= 1")
    row = f.group.power_classes(n)
    return ClassFunction(f.group, [f.values[row[i]] for i in range(len(f.values))])


def adams(n: int, x: VirtualCharacter) -> VirtualCharacter:
    """psi^n, the ring endomorphism with (psi^n x)(g) = x(g^n)."""
    return x.table.from_class_function(adams_on_class_function(n, x.as_class_function()))


def _newton_tower(k: int, x: VirtualCharacter, sign: int) -> ClassFunction:
    # sign=-1: exterior powers  m*lam_m = sum (-1)^(i-1) lam_(m-i) psi_i
    # sign=+1: symmetric powers m*h_m   = sum          h_(m-i) psi_i
    cf = x.as_class_function()
    G = x.group
    psi = [None] + [adams_on_class_function(i, cf) for i in range(1, k + 1)]
    ops = [ClassFunction(G, [1] * len(cf.values))]
    for m in range(1, k + 1):
        acc = ClassFunction(G, [0] * len(cf.values))
        for i in range(1, m + 1):
            term = ops[m - i] * psi[i]
            acc = acc + (term if sign > 0 or i % 2 == 1 else -term)
        ops.append(acc * Fraction(1, m))
    return ops[k]


def lambda_op(k: int, x: VirtualCharacter) -> VirtualCharacter:
    """lambda^k via Newton's identities; lambda^0 = 1, lambda^1 = id."""
    if k < 0:
        raise InputError("lambda operations are defined for k >= 0")
    return x.table.from_class_function(_newton_tower(k, x, sign=-1))


def sym_op(k: int, x: VirtualCharacter) -> VirtualCharacter:
    """Sym^k via Newton's identities for complete homogeneous functions."""
    if k < 0:
        raise InputError("symmetric powers are defined for k >= 0")
    return x.table.from_class_function(_newton_tower(k, x, sign=1))
