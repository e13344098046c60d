"""Exact symbolic engine for the derivative principle.

Joint densities of diagonal entries are represented as an exact constant
times a rational-coefficient polynomial times a Gaussian or gamma weight per
coordinate.  The Vandermonde differential operator prod_{i<j} (d_i - d_j) is
applied literally by the product rule, which keeps that class closed, so the
resulting eigenvalue densities can be compared with their closed forms as
exact polynomial-and-constant identities (no floating tolerance).

All coefficients are :class:`fractions.Fraction`; constants that involve
sqrt(pi) or square roots of rationals live in :class:`ExactScalar`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

from .errors import DomainError

FULL_SPACE = "full"
POSITIVE_ORTHANT = "positive"


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise DomainError(f"expected an exact rational, got {type(v).__name__}")


class SparsePolynomial:
    """Multivariate polynomial: map from exponent vectors to rational coefficients.

    Zero coefficients are never stored; all exponent vectors have length ``n``.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        if n < 1:
            raise DomainError("polynomial needs at least one variable")
        self.n = n
        self.terms: dict[tuple, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                c = _as_fraction(coeff)
                if len(exps) != n or any(e < 0 for e in exps):
                    raise DomainError(f"bad exponent vector {exps} for n={n}")
                if c != 0:
                    self.terms[tuple(exps)] = c

    @classmethod
    def constant(cls, n: int, value) -> "SparsePolynomial":
        return cls(n, {(0,) * n: _as_fraction(value)})

    @classmethod
    def variable(cls, n: int, i: int) -> "SparsePolynomial":
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return SparsePolynomial(self.n, out)

    def __sub__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        return self + (-other)

    def __neg__(self) -> "SparsePolynomial":
        return SparsePolynomial(self.n, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return SparsePolynomial(self.n, out)

    __rmul__ = __mul__

    def scale(self, factor) -> "SparsePolynomial":
        f = _as_fraction(factor)
        if f == 0:
            return SparsePolynomial(self.n)
        return SparsePolynomial(self.n, {e: c * f for e, c in self.terms.items()})

    def diff(self, i: int) -> "SparsePolynomial":
        out: dict[tuple, Fraction] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            d = list(e)
            d[i] -= 1
            out[tuple(d)] = c * e[i]
        return SparsePolynomial(self.n, out)

    def shift_exponent(self, i: int, by: int) -> "SparsePolynomial":
        """Multiply by x_i^by (``by`` may be negative when every term allows it)."""
        out: dict[tuple, Fraction] = {}
        for e, c in self.terms.items():
            if e[i] + by < 0:
                raise DomainError("negative exponent after shift")
            d = list(e)
            d[i] += by
            out[tuple(d)] = c
        return SparsePolynomial(self.n, out)

    def min_common_power(self) -> int:
        """Largest s with (x_1 ... x_n)^s dividing every term."""
        if not self.terms:
            return 0
        return min(min(e) for e in self.terms)

    def swap(self, i: int, j: int) -> "SparsePolynomial":
        out = {}
        for e, c in self.terms.items():
            d = list(e)
            d[i], d[j] = d[j], d[i]
            out[tuple(d)] = c
        return SparsePolynomial(self.n, out)

    def evaluate(self, xs):
        if len(xs) != self.n:
            raise DomainError("wrong number of coordinates")
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, p in zip(xs, e):
                term = term * x**p
            total = total + term
        return total

    def leading(self) -> tuple:
        """Deterministic leading exponent vector (max in tuple order)."""
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        return max(self.terms)

    def _check(self, other):
        if not isinstance(other, SparsePolynomial) or other.n != self.n:
            raise DomainError("polynomial arity mismatch")

    def __eq__(self, other) -> bool:
        return isinstance(other, SparsePolynomial) and self.n == other.n and self.terms == other.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"x{i + 1}" if p == 1 else f"x{i + 1}^{p}" for i, p in enumerate(e) if p > 0
            )
            if mono:
                parts.append(f"{c}*{mono}")
            else:
                parts.append(str(c))
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def vandermonde_poly(n: int) -> SparsePolynomial:
    """prod_{i<j} (x_i - x_j) as an exact polynomial."""
    out = SparsePolynomial.constant(n, 1)
    for i, j in combinations(range(n), 2):
        out = out * (SparsePolynomial.variable(n, i) - SparsePolynomial.variable(n, j))
    return out


def _squarefree_split(k: int) -> tuple[int, int]:
    """k = square * squarefree for a positive integer; returns (sqrt(square), squarefree)."""
    root, free = 1, 1
    d = 2
    while d * d <= k:
        exp = 0
        while k % d == 0:
            k //= d
            exp += 1
        root *= d ** (exp // 2)
        if exp % 2:
            free *= d
        d += 1
    return root, free * k


class ExactScalar:
    """Exact constant of the form frac * pi^(pi_half/2) * sqrt(rad).

    ``rad`` is kept as a positive squarefree integer, so equality is plain
    componentwise comparison.  Closed under multiplication and division,
    which is all the normalization integrals need.
    """

    __slots__ = ("frac", "pi_half", "rad")

    def __init__(self, frac, pi_half: int = 0, rad=1):
        f = _as_fraction(frac)
        r = _as_fraction(rad)
        if r <= 0:
            raise DomainError("radicand must be positive")
        if f == 0:
            self.frac, self.pi_half, self.rad = Fraction(0), 0, 1
            return
        # sqrt(p/q) = sqrt(p q)/q; then pull the square part of p q into frac
        f = f / r.denominator
        root, free = _squarefree_split(r.numerator * r.denominator)
        self.frac = f * root
        self.pi_half = int(pi_half)
        self.rad = free

    @classmethod
    def one(cls) -> "ExactScalar":
        return cls(Fraction(1))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactScalar(other)
        return ExactScalar(
            self.frac * other.frac, self.pi_half + other.pi_half, Fraction(self.rad * other.rad)
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactScalar(other)
        if other.frac == 0:
            raise ZeroDivisionError("division by exact zero")
        return ExactScalar(
            self.frac / (other.frac * other.rad), self.pi_half - other.pi_half,
            Fraction(self.rad * other.rad),
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExactScalar(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        if self.frac == 0 and other.frac == 0:
            return True
        return self.frac == other.frac and self.pi_half == other.pi_half and self.rad == other.rad

    def value(self) -> float:
        return float(self.frac) * math.pi ** (self.pi_half / 2.0) * math.sqrt(self.rad)

    def __str__(self) -> str:
        parts = [str(self.frac)]
        if self.frac != 0 and self.pi_half != 0:
            e = Fraction(self.pi_half, 2)
            parts.append("pi" if e == 1 else f"pi^({e})")
        if self.frac != 0 and self.rad != 1:
            parts.append(f"sqrt({self.rad})")
        return " * ".join(parts)

    __repr__ = __str__


class WeightedDensity:
    """const * poly(x) * prod_i x_i^pow * exp(-quad x_i^2 - lin x_i) on its domain.

    Exactly two weight families are supported, matching the Gaussian and
    gamma diagonal laws: quad > 0 forces lin = 0, pow = 0 on full space, and
    any pow > 0 or lin != 0 with quad = 0 forces the positive orthant.
    """

    __slots__ = ("n", "const", "poly", "quad", "lin", "pow", "domain")

    def __init__(self, n, poly, quad=0, lin=0, pow=0, domain=FULL_SPACE, const=None):
        self.n = int(n)
        if not isinstance(poly, SparsePolynomial) or poly.n != self.n:
            raise DomainError("poly must be a SparsePolynomial over the same coordinates")
        self.poly = poly
        self.quad = _as_fraction(quad)
        self.lin = _as_fraction(lin)
        self.pow = int(pow)
        self.domain = domain
        self.const = const if const is not None else ExactScalar.one()
        if domain not in (FULL_SPACE, POSITIVE_ORTHANT):
            raise DomainError(f"unknown domain {domain!r}")
        if self.quad < 0 or self.pow < 0:
            raise DomainError("quad and pow must be nonnegative")
        if self.quad > 0 and (self.lin != 0 or self.pow != 0 or domain != FULL_SPACE):
            raise DomainError("Gaussian weight requires lin = 0, pow = 0 on full space")
        if self.quad == 0 and (self.pow > 0 or self.lin != 0) and domain != POSITIVE_ORTHANT:
            raise DomainError("power/exponential weight requires the positive orthant")

    def _with(self, **kw) -> "WeightedDensity":
        args = dict(
            n=self.n, poly=self.poly, quad=self.quad, lin=self.lin,
            pow=self.pow, domain=self.domain, const=self.const,
        )
        args.update(kw)
        return WeightedDensity(**args)

    def evaluate(self, xs) -> float:
        if len(xs) != self.n:
            raise DomainError("wrong number of coordinates")
        xs = [float(x) for x in xs]
        if self.domain == POSITIVE_ORTHANT and any(x < 0 for x in xs):
            return 0.0
        value = self.const.value() * float(self.poly.evaluate(xs))
        for x in xs:
            if self.pow:
                value *= x**self.pow
            value *= math.exp(-float(self.quad) * x * x - float(self.lin) * x)
        return value

    def canonical(self) -> "WeightedDensity":
        """Unique representative: common x-power folded into pow, poly made monic."""
        poly, const, pw = self.poly, self.const, self.pow
        if poly.is_zero():
            return self._with(poly=poly, const=ExactScalar(Fraction(0)), pow=0)
        s = poly.min_common_power()
        if s and self.domain == POSITIVE_ORTHANT:
            for i in range(self.n):
                poly = poly.shift_exponent(i, -s)
            pw += s
        lead = poly.terms[poly.leading()]
        poly = poly.scale(Fraction(1) / lead)
        const = const * lead
        return self._with(poly=poly, const=const, pow=pw)

    def equals_exactly(self, other: "WeightedDensity") -> bool:
        a, b = self.canonical(), other.canonical()
        return (
            a.n == b.n and a.domain == b.domain and a.quad == b.quad and a.lin == b.lin
            and a.pow == b.pow and a.const == b.const and a.poly == b.poly
        )

    def __str__(self) -> str:
        xs = "+".join(f"x{i + 1}" for i in range(self.n))
        sq = "+".join(f"x{i + 1}^2" for i in range(self.n))
        w = []
        if self.quad != 0:
            w.append(f"-{self.quad}*({sq})")
        if self.lin != 0:
            w.append(f"-{self.lin}*({xs})")
        weight = f"exp({''.join(w)})" if w else "exp(0)"
        pw = ""
        if self.pow:
            prod = "*".join(f"x{i + 1}" for i in range(self.n))
            pw = f" * ({prod})^{self.pow}"
        return f"({self.const}) * ({self.poly}){pw} * {weight} on {self.domain}"

    __repr__ = __str__


def partial_derivative(d: WeightedDensity, i: int) -> WeightedDensity:
    """Exact d/dx_i of a weighted density; stays inside the class.

    The x_i^{pow-1} factor produced by differentiating the power weight is
    handled by multiplying the polynomial through by the other coordinates
    and lowering the shared pow by one.
    """
    if not 0 <= i < d.n:
        raise DomainError(f"coordinate {i} out of range for n={d.n}")
    x_i = SparsePolynomial.variable(d.n, i)
    trailer = d.poly.scale(-2 * d.quad) * x_i + d.poly.scale(-d.lin)
    if d.pow == 0:
        return d._with(poly=d.poly.diff(i) + trailer)
    # multiply everything by x_i (and track pow - 1), then restore the other
    # coordinates' full power by multiplying their x_j back in
    core = x_i * d.poly.diff(i) + d.poly.scale(d.pow) + x_i * trailer
    for j in range(d.n):
        if j != i:
            core = core * SparsePolynomial.variable(d.n, j)
    return d._with(poly=core, pow=d.pow - 1)


def apply_vandermonde_operator(d: WeightedDensity) -> WeightedDensity:
    """Apply prod_{i<j} (d_i - d_j) in lexicographic pair order."""
    out = d
    for i, j in combinations(range(d.n), 2):
        di = partial_derivative(out, i)
        dj = partial_derivative(out, j)
        out = di._with(poly=di.poly - dj.poly)
    return out


def derivative_principle(q: WeightedDensity) -> WeightedDensity:
    """Eigenvalue density from the diagonal density.

    p = (prod_k k!)^{-1} (-1)^{n(n-1)/2} Delta(lambda) Delta(d/dlambda) q,
    returned exactly (the input is assumed normalized; only the constant is
    affected otherwise).
    """
    n = q.n
    r = apply_vandermonde_operator(q)
    pairs = n * (n - 1) // 2
    prefactor = Fraction((-1) ** pairs, math.prod(math.factorial(k) for k in range(1, n + 1)))
    return r._with(poly=vandermonde_poly(n) * r.poly, const=r.const * prefactor)


def gue_diag_density(n: int, K: int) -> WeightedDensity:
    """Joint law of the diagonal of a sum of K i.i.d. GUE(n) matrices.

    Product of N(0, K/2) coordinates: (K pi)^{-n/2} exp(-<x,x>/K).
    """
    if n < 1 or K < 1:
        raise DomainError("n and K must be >= 1")
    const = ExactScalar(Fraction(1), pi_half=-n, rad=Fraction(1, K**n))
    return WeightedDensity(
        n, SparsePolynomial.constant(n, 1), quad=Fraction(1, K), const=const
    )


def wishart_diag_density(m: int, n: int, K: int) -> WeightedDensity:
    """Joint law of the diagonal of a sum of K complex Wishart m x n matrices.

    Product of Gamma(K n, 1) coordinates: x^{Kn-1} e^{-x} / (Kn-1)! each.
    """
    if not 1 <= m <= n:
        raise DomainError("need 1 <= m <= n")
    if K < 1:
        raise DomainError("K must be >= 1")
    const = ExactScalar(Fraction(1, math.factorial(K * n - 1) ** m))
    return WeightedDensity(
        m, SparsePolynomial.constant(m, 1), lin=Fraction(1), pow=K * n - 1,
        domain=POSITIVE_ORTHANT, const=const,
    )


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def normalize(d: WeightedDensity) -> tuple[WeightedDensity, ExactScalar]:
    """Integrate exactly over the domain; return (unit-integral density, integral).

    Gaussian weights use the exact even moments of exp(-quad x^2) (odd
    moments vanish); gamma weights use integer Gamma moments.  Raises for
    non-integrable weight configurations.
    """
    if d.quad > 0:
        rational = Fraction(0)
        for exps, coeff in d.poly.terms.items():
            if any(e % 2 for e in exps):
                continue
            term = coeff
            for e in exps:
                k = e // 2
                term *= _double_factorial(2 * k - 1) / (2 * d.quad) ** k
            rational += term
        moment = ExactScalar(rational, pi_half=d.n, rad=Fraction(1, d.quad) ** d.n)
    elif d.lin > 0 and d.domain == POSITIVE_ORTHANT:
        rational = Fraction(0)
        for exps, coeff in d.poly.terms.items():
            term = coeff
            for e in exps:
                p = d.pow + e
                term *= Fraction(math.factorial(p)) / d.lin ** (p + 1)
            rational += term
        moment = ExactScalar(rational)
    else:
        raise DomainError("weight is not integrable on its domain")
    integral = d.const * moment
    if integral.frac == 0:
        raise DomainError("density integrates to zero; cannot normalize")
    return d._with(const=d.const / integral), integral


def gue_sum_closed_form(n: int, K: int) -> WeightedDensity:
    """Closed-form joint eigenvalue density of a sum of K GUE(n) matrices.

    (2/K)^{n(n-1)/2} (K pi)^{-n/2} (prod j!)^{-1} Delta(s)^2 exp(-<s,s>/K).
    """
    if n < 1 or K < 1:
        raise DomainError("n and K must be >= 1")
    pairs = n * (n - 1) // 2
    frac = Fraction(2, K) ** pairs / math.prod(math.factorial(j) for j in range(1, n + 1))
    const = ExactScalar(frac, pi_half=-n, rad=Fraction(1, K**n))
    v = vandermonde_poly(n)
    return WeightedDensity(n, v * v, quad=Fraction(1, K), const=const)


def wishart_sum_closed_form(m: int, n: int, K: int) -> WeightedDensity:
    """Closed-form joint eigenvalue density of a sum of K complex Wishart matrices.

    Delta(w)^2 prod_j w_j^{Kn-m} e^{-w_j} / prod_j Gamma(Kn-m+j) Gamma(1+j).
    """
    if not 1 <= m <= n or K < 1:
        raise DomainError("need 1 <= m <= n and K >= 1")
    denom = math.prod(
        math.factorial(K * n - m + j - 1) * math.factorial(j) for j in range(1, m + 1)
    )
    v = vandermonde_poly(m)
    return WeightedDensity(
        m, v * v, lin=Fraction(1), pow=K * n - m, domain=POSITIVE_ORTHANT,
        const=ExactScalar(Fraction(1, denom)),
    )
