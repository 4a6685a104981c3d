"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored on a canonical basis of Q(zeta_n) over Q, the tensor
product over the prime powers q = p^v dividing n of the power bases
{zeta_q^a : 0 <= a < phi(q)}.  An exponent j mod n is a basis exponent iff
every prime-power component a_p = j * (n/q)^-1 mod q lies below phi(q).
The rewriting rule is the vanishing sum

    sum_{k=0..p-1} zeta_n^(j + k*n/p) = 0,

which moves only the p-component of j, by multiples of q/p.  The basis of
Q(zeta_m) embeds into the basis of Q(zeta_n) for m | n, so conductor
reduction is a support condition: drop p when v=1 and all a_p = 0, divide
the p-component by p when v>=2 and all a_p = 0 mod p.  Conductors are
therefore minimal and never congruent to 2 mod 4.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from .errors import InputError

__all__ = ["Cyclotomic", "zeta", "rational", "parse_cyclotomic"]


@lru_cache(maxsize=None)
def _factorization(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n as ((p, p^v), ...), p ascending."""
    out = []
    m = n
    p = 2
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
    return tuple(out)


@lru_cache(maxsize=None)
def _field(n: int):
    """Per-conductor data: (p, q, phi(q), n//q, inv(n//q) mod q, n//p)."""
    data = []
    for p, q in _factorization(n):
        cof = n // q
        data.append((p, q, q - q // p, cof, pow(cof, -1, q), n // p))
    return tuple(data)


def _components(n: int, j: int) -> list[int]:
    return [(j * inv) % q for (_p, q, _phi, _cof, inv, _np) in _field(n)]


def _reduce_to_basis(n: int, coeffs: dict[int, Fraction]) -> dict[int, Fraction]:
    # One pass per prime: rewriting fixes the p-component and leaves the
    # components at other primes untouched.
    for p, q, phi, _cof, inv, n_p in _field(n):
        nxt: dict[int, Fraction] = {}
        for j, c in coeffs.items():
            if (j * inv) % q < phi:
                nxt[j] = nxt.get(j, Fraction(0)) + c
            else:
                for k in range(1, p):
                    t = (j + k * n_p) % n
                    nxt[t] = nxt.get(t, Fraction(0)) - c
        coeffs = {j: c for j, c in nxt.items() if c}
    return coeffs


def _shrink_conductor(n: int, coeffs: dict[int, Fraction]):
    # Support criterion for lying in Q(zeta_{n/p}); repeat until stable.
    changed = True
    while changed and n > 1:
        changed = False
        for p, q, _phi, _cof, inv, _np in _field(n):
            comps = {j: (j * inv) % q for j in coeffs}
            if q == p:
                if any(a != 0 for a in comps.values()):
                    continue
            elif any(a % p != 0 for a in comps.values()):
                continue
            m = n // p
            new: dict[int, Fraction] = {}
            for j, c in coeffs.items():
                parts = []
                for (r, qr, _ph, _cf, invr, _nr), a in zip(_field(n), _components(n, j)):
                    if r == p:
                        if qr > p:
                            parts.append((a // p) * (m // (qr // p)))
                    else:
                        parts.append(a * (m // qr))
                new[sum(parts) % m if m > 1 else 0] = c
            n, coeffs = m, new
            changed = True
            break
    return n, coeffs


class Cyclotomic:
    """An element of a cyclotomic field, in canonical basis form.

    Instances are immutable value objects: equality and hashing go through
    the (conductor, coefficient) normal form, which is unique.
    """

    __slots__ = ("n", "coeffs", "_key", "_hash")

    def __init__(self, n: int, coeffs: dict[int, Fraction], _normal=False):
        if n < 1:
            raise InputError("conductor must be a positive integer")
        if not _normal:
            coeffs = {j % n: Fraction(c) for j, c in coeffs.items() if c}
            coeffs = _reduce_to_basis(n, coeffs)
            n, coeffs = _shrink_conductor(n, coeffs)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", coeffs)
        key = (n, tuple(sorted((j, c.numerator, c.denominator) for j, c in coeffs.items())))
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __setattr__(self, name, value):
        raise AttributeError("Cyclotomic values are immutable")

    # -- ring structure -------------------------------------------------

    @staticmethod
    def _coerce(x) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, (int, Fraction)):
            return rational(Fraction(x))
        raise TypeError(f"cannot interpret {type(x).__name__} as a cyclotomic")

    def _embedded(self, n: int) -> dict[int, Fraction]:
        scale = n // self.n
        return {j * scale: c for j, c in self.coeffs.items()}

    def __add__(self, other):
        other = self._coerce(other)
        n = _lcm(self.n, other.n)
        coeffs = self._embedded(n)
        for j, c in other._embedded(n).items():
            coeffs[j] = coeffs.get(j, Fraction(0)) + c
        return Cyclotomic(n, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, {j: -c for j, c in self.coeffs.items()}, _normal=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        n = _lcm(self.n, other.n)
        a = self._embedded(n)
        b = other._embedded(n)
        coeffs: dict[int, Fraction] = {}
        for j1, c1 in a.items():
            for j2, c2 in b.items():
                t = (j1 + j2) % n
                coeffs[t] = coeffs.get(t, Fraction(0)) + c1 * c2
        return Cyclotomic(n, coeffs)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        q = other.is_rational()
        if q is None:
            raise InputError("division is only supported by nonzero rationals")
        if q == 0:
            raise ZeroDivisionError("division of cyclotomic by zero")
        return self * (1 / q)

    def __pow__(self, k: int):
        if k < 0:
            raise InputError("negative powers of cyclotomics are not supported")
        out = rational(Fraction(1))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "Cyclotomic":
        """Complex conjugation, zeta -> zeta^-1 on every root of unity."""
        return Cyclotomic(self.n, {(-j) % self.n: c for j, c in self.coeffs.items()})

    # -- predicates and views -------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> Fraction | None:
        if not self.coeffs:
            return Fraction(0)
        if self.n == 1:
            return self.coeffs[0]
        return None

    def as_integer(self) -> int | None:
        q = self.is_rational()
        if q is not None and q.denominator == 1:
            return q.numerator
        return None

    def to_complex(self) -> complex:
        """Float approximation; diagnostics and cross-checks only."""
        import cmath

        return sum(
            complex(c) * cmath.exp(2j * cmath.pi * j / self.n) for j, c in self.coeffs.items()
        ) or complex(0)

    def key(self):
        """Canonical sort/equality key (total order on normal forms)."""
        return self._key

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = rational(Fraction(other))
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return self._hash

    # -- serialization ---------------------------------------------------

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for j, c in sorted(self.coeffs.items()):
            if self.n == 1 or j == 0:
                atom = None
            elif j == 1:
                atom = f"E({self.n})"
            else:
                atom = f"E({self.n})^{j}"
            mag = str(abs(c)) if atom is None else ("" if abs(c) == 1 else f"{abs(c)}*")
            term = mag + (atom or "")
            sign = "-" if c < 0 else ("+" if parts else "")
            parts.append(sign + term)
        return "".join(parts)

    def __repr__(self):
        return f"Cyclotomic({self})"

    def to_json(self):
        return {
            "conductor": self.n,
            "coeffs": [[j, c.numerator, c.denominator] for j, c in sorted(self.coeffs.items())],
        }

    @staticmethod
    def from_json(doc) -> "Cyclotomic":
        try:
            return Cyclotomic(
                doc["conductor"], {j: Fraction(num, den) for j, num, den in doc["coeffs"]}
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed cyclotomic JSON: {exc}") from exc


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a // gcd(a, b) * b


def zeta(n: int, k: int = 1) -> Cyclotomic:
    """The root of unity zeta_n^k in canonical form; zeta(n, 0) = 1."""
    if n < 1:
        raise InputError("zeta requires a positive order n")
    return Cyclotomic(n, {k % n: Fraction(1)})


def rational(q) -> Cyclotomic:
    """Embed a rational number as a conductor-1 cyclotomic."""
    return Cyclotomic(1, {0: Fraction(q)}, _normal=False) if q else Cyclotomic(1, {}, _normal=True)


_TOKEN = re.compile(r"\s*(E\(\d+\)|\d+|\^|\+|\-|\*|/|\(|\))")


def parse_cyclotomic(text: str) -> Cyclotomic:
    """Parse `E(n)^k` expressions combined with + - * / and integers."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise InputError(f"cannot parse cyclotomic expression at: {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append(None)
    idx = 0

    def peek():
        return tokens[idx]

    def take():
        nonlocal idx
        tok = tokens[idx]
        idx += 1
        return tok

    def atom() -> Cyclotomic:
        tok = take()
        if tok == "(":
            value = expr()
            if take() != ")":
                raise InputError("unbalanced parentheses in cyclotomic expression")
        elif tok == "-":
            return -atom()
        elif tok == "+":
            return atom()
        elif tok is None:
            raise InputError("unexpected end of cyclotomic expression")
        elif tok.startswith("E("):
            value = zeta(int(tok[2:-1]))
        elif tok.isdigit():
            value = rational(Fraction(int(tok)))
        else:
            raise InputError(f"unexpected token {tok!r} in cyclotomic expression")
        if peek() == "^":
            take()
            e = take()
            neg = False
            if e == "-":
                neg, e = True, take()
            if e is None or not e.isdigit():
                raise InputError("exponent must be an integer")
            k = int(e)
            if isinstance(value, Cyclotomic) and neg:
                root = value
                if len(root.coeffs) == 1 and abs(next(iter(root.coeffs.values()))) == 1:
                    # negative powers only for roots of unity: invert via conj
                    value = root.conj() ** k if next(iter(root.coeffs.values())) == 1 else (-((-root).conj())) ** k
                else:
                    raise InputError("negative exponents only allowed on roots of unity")
            else:
                value = value**k
        return value

    def factor() -> Cyclotomic:
        value = atom()
        while peek() in ("*", "/"):
            op = take()
            rhs = atom()
            value = value * rhs if op == "*" else value / rhs
        return value

    def expr() -> Cyclotomic:
        value = factor()
        while peek() in ("+", "-"):
            op = take()
            rhs = factor()
            value = value + rhs if op == "+" else value - rhs
        return value

    out = expr()
    if peek() is not None:
        raise InputError(f"trailing input in cyclotomic expression: {peek()!r}")
    return out
