"""Permutations of {0, ..., degree-1} as immutable image arrays."""

from __future__ import annotations

import re
from math import lcm

from .errors import InputError

__all__ = ["Permutation", "identity", "parse_cycles", "cycle_string"]


class Permutation:
    """A bijection on {0..degree-1}; (p * q)(x) = p(q(x))."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise InputError(f"not a permutation of 0..{len(images) - 1}: {images}")
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation values are immutable")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(self.images) != len(other.images):
            raise InputError("cannot compose permutations of different degrees")
        return Permutation(tuple(self.images[x] for x in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(tuple(inv))

    def __pow__(self, n: int) -> "Permutation":
        if n < 0:
            return self.inverse() ** (-n)
        out = identity(self.degree)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self, g: "Permutation") -> "Permutation":
        """g * self * g^-1."""
        return g * self * g.inverse()

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def order(self) -> int:
        cycs = self.cycles()
        return lcm(*(len(c) for c in cycs)) if cycs else 1

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(len(self.images)):
            if start in seen or self.images[start] == start:
                seen.add(start)
                continue
            cyc = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __le__(self, other):
        return self.images <= other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({cycle_string(self)!r}, degree={self.degree})"


def identity(degree: int) -> Permutation:
    return Permutation(range(degree))


def cycle_string(p: Permutation) -> str:
    cycs = p.cycles()
    if not cycs:
        return "()"
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cycs)


_CYCLE = re.compile(r"\(\s*((?:\d+[\s,]*)*)\)\s*")


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse cycle notation like ``(0 1 2)(3 4)`` with 0-based points.

    Non-disjoint cycles compose as functions: the rightmost cycle acts first.
    """
    stripped = text.strip()
    perm = identity(degree)
    consumed = 0
    for m in _CYCLE.finditer(stripped):
        if m.start() != consumed:
            raise InputError(f"malformed cycle notation: {stripped!r}")
        consumed = m.end()
        pts = [int(tok) for tok in re.split(r"[\s,]+", m.group(1).strip()) if tok]
        if len(set(pts)) != len(pts):
            raise InputError(f"repeated point in cycle: {m.group(0).strip()}")
        images = list(range(degree))
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if a >= degree or b >= degree:
                raise InputError(f"point {max(a, b)} exceeds degree {degree}")
            images[a] = b
        perm = perm * Permutation(images)
    if consumed != len(stripped):
        raise InputError(f"malformed cycle notation: {stripped!r}")
    return perm
