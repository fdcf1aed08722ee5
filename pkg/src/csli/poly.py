"""Univariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .space import as_fraction


class Poly:
    """Coefficients are stored lowest degree first, trailing zeros stripped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> Poly:
        return cls([c])

    @classmethod
    def linear(cls, slope, offset) -> Poly:
        return cls([offset, slope])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(str(c) if i == 0 else f"{c}*x" if i == 1 else f"{c}*x^{i}")
        return " + ".join(terms)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        if self.is_zero or other.is_zero:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def compose_affine(self, slope, offset) -> Poly:
        """``x -> self(slope*x + offset)``."""
        inner = Poly.linear(slope, offset)
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def derivative(self) -> Poly:
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        d, lead = other.degree, other.lead
        while len(rem) - 1 >= d and any(rem):
            shift = len(rem) - 1 - d
            f = rem[-1] / lead
            q[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= f * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(q), Poly(rem)

    def monic(self) -> Poly:
        return Poly(c / self.lead for c in self.coeffs) if self.coeffs else self

    def nonnegative_on(self, lo=None, hi=None) -> bool:
        """Exact test of ``p >= 0`` on the closed range ``[lo, hi]`` (None = unbounded)."""
        return _sign_ok(self, lo, hi, strict=False)

    def positive_on(self, lo=None, hi=None) -> bool:
        """Exact test of ``p > 0`` on the closed range ``[lo, hi]``."""
        return _sign_ok(self, lo, hi, strict=True)


def _lift(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(x)


def gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero:
        a, b = b, a.divmod(b)[1]
    return a.monic()


def squarefree(p: Poly) -> Poly:
    g = gcd(p, p.derivative())
    return p.divmod(g)[0].monic()


def sturm_chain(p: Poly) -> list[Poly]:
    chain = [p, p.derivative()]
    while not chain[-1].is_zero:
        chain.append(-chain[-2].divmod(chain[-1])[1])
    return chain[:-1]


def _variations(chain: list[Poly], x: Fraction) -> int:
    signs = [v for v in (q(x) for q in chain) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(chain: list[Poly], lo: Fraction, hi: Fraction) -> int:
    """Distinct roots in ``(lo, hi)``; ``lo`` and ``hi`` must not be roots."""
    return _variations(chain, lo) - _variations(chain, hi)


def _nonroot_near(q: Poly, lo: Fraction, hi: Fraction) -> Fraction:
    # some point strictly inside (lo, hi) that is not a root of q
    k = 2
    while True:
        for j in range(1, k):
            m = lo + (hi - lo) * Fraction(j, k)
            if q(m) != 0:
                return m
        k += 1


def _sign_ok(p: Poly, lo, hi, strict: bool) -> bool:
    if p.is_zero:
        return not strict
    lo = None if lo is None else as_fraction(lo)
    hi = None if hi is None else as_fraction(hi)
    if p.is_constant:
        c = p.constant_value()
        return c > 0 if strict else c >= 0
    d, lead = p.degree, p.lead
    # behaviour at an unbounded end is that of the leading term
    if hi is None and lead < 0:
        return False
    if lo is None and (lead if d % 2 == 0 else -lead) < 0:
        return False
    bound = 1 + max(abs(c / lead) for c in p.coeffs[:-1])
    lo = -bound if lo is None else lo
    hi = bound if hi is None else hi
    if lo > hi:
        return True
    for end in (lo, hi):
        v = p(end)
        if v < 0 or (strict and v == 0):
            return False
    if lo == hi:
        return True
    q = squarefree(p)
    for end in (lo, hi):
        if q(end) == 0:
            q = q.divmod(Poly.linear(1, -end))[0]
    chain = sturm_chain(q)
    if strict:
        if q.degree >= 1 and count_roots(chain, lo, hi) > 0:
            return False
        return p((lo + hi) / 2) > 0
    if q.degree < 1:
        return p((lo + hi) / 2) >= 0
    return all(p(s) >= 0 for s in _bracketing_samples(q, chain, lo, hi))


def _bracketing_samples(q: Poly, chain, lo: Fraction, hi: Fraction) -> list[Fraction]:
    """Sample points hitting every root-free gap of ``q`` inside ``(lo, hi)``.

    Bisection until each piece holds at most one root; the piece boundaries
    then separate consecutive roots, and the end pieces are split once more so
    the gaps next to ``lo`` and ``hi`` are sampled too.
    """
    pieces = [(lo, hi)]
    done: list[tuple[Fraction, Fraction, int]] = []
    while pieces:
        a, b = pieces.pop()
        n = count_roots(chain, a, b)
        if n <= 1:
            done.append((a, b, n))
            continue
        m = _nonroot_near(q, a, b)
        pieces += [(a, m), (m, b)]
    done.sort()
    samples = []
    for a, b, n in done:
        if n == 0:
            samples.append((a + b) / 2)
            continue
        # one root in (a, b): find points on both sides of it
        left, right = a, b
        while True:
            m = _nonroot_near(q, left, right)
            if count_roots(chain, left, m) == 1:
                right = m
            else:
                left = m
            if left != a and right != b:
                break
        samples += [left, right]
    return samples
