"""Exact arithmetic in the cyclotomic field Q(zeta_2n) and its real subfield.

Elements are integer coefficient vectors over the power basis
1, z, ..., z^(phi(2n)-1) with z = zeta_2n = e^(i*pi/n), reduced modulo the
2n-th cyclotomic polynomial, over a single positive integer denominator.
Canonical form is unique, so equality is coefficient-wise.
"""

from __future__ import annotations

import cmath
import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import mpmath

__all__ = [
    "CycRat",
    "SumOfRoots",
    "RealCyc",
    "zeta",
    "integer",
    "canonicalize",
    "mu",
    "b_to_c",
    "c_to_b",
    "b_vector_value",
    "c_vector_value",
    "real_sign",
    "real_cmp",
    "to_complex",
    "is_root_of_unity",
    "has_rational_arg",
    "from_literal",
    "to_literal",
]

_ctx_lock = threading.Lock()


@lru_cache(maxsize=None)
def _cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the m-th cyclotomic polynomial."""
    if m == 1:
        return (-1, 1)
    # x^m - 1 divided by the product of Phi_d over proper divisors d of m.
    num = [0] * (m + 1)
    num[0] = -1
    num[m] = 1
    for d in range(1, m):
        if m % d == 0:
            num = _poly_divide_exact(num, _cyclotomic_poly(d))
    return tuple(num)


def _poly_divide_exact(num: Sequence[int], den: Sequence[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    lead = den[dd]
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c == 0:
            continue
        q, r = divmod(c, lead)
        if r:
            raise ArithmeticError("non-exact polynomial division")
        out[i - dd] = q
        for j, dc in enumerate(den):
            num[i - dd + j] -= q * dc
    if any(num):
        raise ArithmeticError("non-exact polynomial division")
    return out


class _FieldContext:
    """Per-n tables: Phi_2n, power reduction, root lookup.  Read-only after build."""

    def __init__(self, n: int) -> None:
        if n < 1:
            raise ValueError("order parameter n must be >= 1")
        self.n = n
        self.m = 2 * n
        phi_poly = _cyclotomic_poly(self.m)
        self.degree = len(phi_poly) - 1
        self.phi_poly = phi_poly
        # power_table[k] = vector of zeta^k mod Phi_2n, k in [0, 2n)
        table = []
        cur = [0] * self.degree
        cur[0] = 1
        for _ in range(self.m):
            table.append(tuple(cur))
            cur = self._shift_reduce(cur)
        self.power_table: tuple[tuple[int, ...], ...] = tuple(table)
        self.root_lookup = {vec: k for k, vec in enumerate(table)}

    def _shift_reduce(self, vec: list[int]) -> list[int]:
        # multiply by x, reduce the single overflow coefficient by Phi.
        top = vec[-1]
        out = [0] + vec[:-1]
        if top:
            for j in range(self.degree):
                out[j] -= top * self.phi_poly[j]
        return out

    def reduce_poly(self, coeffs: Sequence[int]) -> list[int]:
        out = list(coeffs)
        d = self.degree
        for i in range(len(out) - 1, d - 1, -1):
            c = out[i]
            if c == 0:
                continue
            out[i] = 0
            # x^i = x^(i-d) * x^d, and x^d = -(phi_poly[:d])
            for j in range(d):
                out[i - d + j] -= c * self.phi_poly[j]
        return out[:d] if len(out) >= d else out + [0] * (d - len(out))


@lru_cache(maxsize=None)
def _context(n: int) -> _FieldContext:
    with _ctx_lock:
        return _FieldContext(n)


def _vec_gcd(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, v)
        if g == 1:
            return 1
    return g


class CycRat:
    """Element of Q(zeta_2n) in unique canonical form."""

    __slots__ = ("n", "num", "den")

    def __init__(self, n: int, num: Sequence[int], den: int = 1, _canonical: bool = False):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        ctx = _context(n)
        if _canonical:
            self.n = n
            self.num = tuple(num)
            self.den = den
            return
        vec = ctx.reduce_poly(list(num))
        if den < 0:
            den = -den
            vec = [-c for c in vec]
        g = math.gcd(_vec_gcd(vec), den)
        if g > 1:
            vec = [c // g for c in vec]
            den //= g
        self.n = n
        self.num = tuple(vec)
        self.den = den

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(n: int) -> "CycRat":
        return CycRat(n, [0] * _context(n).degree, 1, _canonical=True)

    @staticmethod
    def one(n: int) -> "CycRat":
        return integer(n, 1)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.num)

    def is_integral(self) -> bool:
        """True iff the element lies in Z[zeta_2n]."""
        return self.den == 1

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "CycRat") -> None:
        if self.n != other.n:
            raise ValueError(f"mixed field orders {self.n} and {other.n}")

    def __add__(self, other: "CycRat") -> "CycRat":
        self._check(other)
        a, b = self, other
        num = [x * b.den + y * a.den for x, y in zip(a.num, b.num)]
        return CycRat(self.n, num, a.den * b.den)

    def __sub__(self, other: "CycRat") -> "CycRat":
        return self + (-other)

    def __neg__(self) -> "CycRat":
        return CycRat(self.n, [-c for c in self.num], self.den, _canonical=True)

    def __mul__(self, other: "CycRat") -> "CycRat":
        self._check(other)
        a, b = self.num, other.num
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
        return CycRat(self.n, prod, self.den * other.den)

    def conj(self) -> "CycRat":
        """Complex conjugation zeta^k -> zeta^(-k)."""
        ctx = _context(self.n)
        out = [0] * ctx.degree
        for j, c in enumerate(self.num):
            if c == 0:
                continue
            inv = ctx.power_table[(-j) % ctx.m]
            for t, w in enumerate(inv):
                out[t] += c * w
        return CycRat(self.n, out, self.den)

    def scale(self, k: int) -> "CycRat":
        return CycRat(self.n, [k * c for c in self.num], self.den)

    def divide_int(self, k: int) -> "CycRat":
        return CycRat(self.n, self.num, self.den * k)

    def norm_sq(self) -> "RealCyc":
        """z * conj(z) as a certified self-conjugate element."""
        return RealCyc(self * self.conj())

    def inverse(self) -> "CycRat":
        """Field inverse via exact linear solve against the basis."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        ctx = _context(self.n)
        d = ctx.degree
        # columns: self * zeta^j in the power basis
        cols = []
        for j in range(d):
            col = [0] * (2 * d)
            for i, c in enumerate(self.num):
                col[i + j] += c
            cols.append(ctx.reduce_poly(col))
        mat = [[Fraction(cols[j][i]) for j in range(d)] for i in range(d)]
        rhs = [Fraction(self.den if i == 0 else 0) for i in range(d)]
        sol = _solve_fraction_system(mat, rhs)
        den = 1
        for f in sol:
            den = den * f.denominator // math.gcd(den, f.denominator)
        num = [int(f * den) for f in sol]
        return CycRat(self.n, num, den)

    def __truediv__(self, other: "CycRat") -> "CycRat":
        return self * other.inverse()

    def embed(self, factor: int) -> "CycRat":
        """Image in Q(zeta_(2*n*factor)) via zeta_2n -> zeta_(2nf)^f."""
        big = _context(self.n * factor)
        out = [0] * big.degree
        for j, c in enumerate(self.num):
            if c == 0:
                continue
            vec = big.power_table[(j * factor) % big.m]
            for t, w in enumerate(vec):
                out[t] += c * w
        return CycRat(self.n * factor, out, self.den)

    # -- comparisons / hashing ---------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CycRat):
            return NotImplemented
        return self.n == other.n and self.den == other.den and self.num == other.num

    def __hash__(self) -> int:
        return hash((self.n, self.den, self.num))

    def key(self) -> tuple:
        return (self.n, self.den) + self.num

    def __repr__(self) -> str:
        terms = [f"{c}*z^{j}" for j, c in enumerate(self.num) if c]
        body = " + ".join(terms) if terms else "0"
        if self.den != 1:
            body = f"({body})/{self.den}"
        return f"CycRat[n={self.n}]({body})"

    # -- numerics -----------------------------------------------------------

    def complex_approx(self) -> complex:
        """Fast float approximation (no certified bound)."""
        z = 0j
        step = cmath.exp(1j * math.pi / self.n)
        w = 1 + 0j
        for c in self.num:
            if c:
                z += c * w
            w *= step
        return z / self.den


def _solve_fraction_system(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    d = len(mat)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(d):
        piv = next((r for r in range(col, d) if aug[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(d):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][d] for i in range(d)]


# -- public constructors ----------------------------------------------------

def zeta(n: int, k: int = 1) -> CycRat:
    """zeta_2n^k."""
    ctx = _context(n)
    return CycRat(n, ctx.power_table[k % ctx.m], 1, _canonical=True)


def integer(n: int, value: int) -> CycRat:
    ctx = _context(n)
    vec = [0] * ctx.degree
    vec[0] = value
    return CycRat(n, vec, 1, _canonical=True)


def canonicalize(n: int, terms: Iterable[tuple[int, int]], den: int = 1) -> CycRat:
    """Canonical form of (sum of coeff * zeta_2n^exponent) / den."""
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    ctx = _context(n)
    vec = [0] * ctx.degree
    for coeff, expo in terms:
        if coeff == 0:
            continue
        base = ctx.power_table[expo % ctx.m]
        for t, w in enumerate(base):
            vec[t] += coeff * w
    return CycRat(n, vec, den)


# -- sums of roots of unity --------------------------------------------------

class SumOfRoots:
    """eta as an explicit sum of roots of unity (non-canonical view)."""

    __slots__ = ("n", "alphas")

    def __init__(self, n: int, alphas: Sequence[int]):
        if not alphas:
            raise ValueError("need at least one root")
        self.n = n
        self.alphas = tuple(sorted(a % (2 * n) for a in alphas))

    @property
    def l(self) -> int:
        return len(self.alphas)

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for a in self.alphas:
            out[a] = out.get(a, 0) + 1
        return out

    def value(self) -> CycRat:
        return canonicalize(self.n, [(1, a) for a in self.alphas])

    def rotated(self, c: int) -> "SumOfRoots":
        return SumOfRoots(self.n, [a + c for a in self.alphas])

    def reflected(self) -> "SumOfRoots":
        return SumOfRoots(self.n, [-a for a in self.alphas])

    def orbit_normal_form(self) -> tuple[int, ...]:
        """Lexicographically least tuple over the 4n dihedral images."""
        best: Optional[tuple[int, ...]] = None
        for base in (self, self.reflected()):
            for a in set(base.alphas):
                cand = base.rotated(-a).alphas
                if best is None or cand < best:
                    best = cand
        assert best is not None
        return best

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SumOfRoots):
            return NotImplemented
        return self.n == other.n and self.alphas == other.alphas

    def __hash__(self) -> int:
        return hash((self.n, self.alphas))

    def __repr__(self) -> str:
        return f"SumOfRoots(n={self.n}, alphas={list(self.alphas)})"


# -- real subfield ------------------------------------------------------------

class RealCyc:
    """Self-conjugate element of Q(zeta_2n); order and sign are well defined."""

    __slots__ = ("value",)

    def __init__(self, value: CycRat):
        if value != value.conj():
            raise ValueError("element is not self-conjugate")
        self.value = value

    @property
    def n(self) -> int:
        return self.value.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RealCyc):
            return NotImplemented
        return self.value == other.value

    def __hash__(self) -> int:
        return hash(self.value)

    def __add__(self, other: "RealCyc") -> "RealCyc":
        return RealCyc(self.value + other.value)

    def __sub__(self, other: "RealCyc") -> "RealCyc":
        return RealCyc(self.value - other.value)

    def __mul__(self, other: "RealCyc") -> "RealCyc":
        return RealCyc(self.value * other.value)

    def sign(self) -> int:
        return real_sign(self)

    def float_approx(self) -> float:
        return self.value.complex_approx().real

    def __repr__(self) -> str:
        return f"RealCyc({self.value!r})"


def mu(n: int, k: int) -> RealCyc:
    """Length of the k-th diagonal of a regular unit n-gon."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"diagonal index {k} out of range for n={n}")
    return RealCyc(canonicalize(n, [(1, 2 * i - k + 1) for i in range(k)]))


def _mu_b_vector(n: int, k: int) -> list[int]:
    """b-representation of mu(n, k): exponent pattern {k-1, k-3, ...}."""
    size = (n - 1) // 2 + 1
    vec = [0] * size
    for i in range(k):
        e = 2 * i - k + 1
        if e == 0:
            vec[0] += 1
        elif e > 0:
            # each positive exponent stands for one conjugate pair;
            # e <= k-1 <= floor(n/2)-1 so no reduction is needed
            vec[e] += 1
    return vec


def b_vector_value(n: int, b: Sequence[int]) -> RealCyc:
    terms = [(b[0], 0)] if b else [(0, 0)]
    for k in range(1, len(b)):
        if b[k]:
            terms.append((b[k], k))
            terms.append((b[k], -k))
    return RealCyc(canonicalize(n, terms))


def c_vector_value(n: int, c: Sequence[int]) -> RealCyc:
    total = integer(n, 0)
    for k, ck in enumerate(c, start=1):
        if ck:
            total = total + mu(n, k).value.scale(ck)
    return RealCyc(total)


def c_to_b(n: int, c: Sequence[int]) -> list[int]:
    """Linear change of basis from diagonal coefficients to conjugate pairs."""
    if len(c) > n // 2:
        raise ValueError(f"c-vector may have at most {n // 2} entries for n={n}")
    c = list(c) + [0] * (n // 2 - len(c))
    size = (n - 1) // 2 + 1
    out = [0] * size
    for k, ck in enumerate(c, start=1):
        if ck == 0:
            continue
        pattern = _mu_b_vector(n, k)
        for j, w in enumerate(pattern):
            out[j] += ck * w
    return out


def b_to_c(n: int, b: Sequence[int]) -> list[int]:
    """Inverse of c_to_b; raises if some coefficient would go negative."""
    size = (n - 1) // 2 + 1
    if len(b) > size:
        raise ValueError(f"b-vector may have at most {size} entries for n={n}")
    rem = list(b) + [0] * (size - len(b))
    c = [0] * (n // 2)
    # mu(n,k) has leading pair index k-1, so peel from the top down.
    for k in range(n // 2, 0, -1):
        lead = k - 1
        coeff = rem[lead] if lead > 0 else rem[0]
        if coeff == 0:
            continue
        c[k - 1] = coeff
        pattern = _mu_b_vector(n, k)
        for j, w in enumerate(pattern):
            rem[j] -= coeff * w
    for j, v in enumerate(rem):
        if v != 0:
            raise ValueError(f"b-vector not expressible: residual at pair index {j}")
    for k, ck in enumerate(c, start=1):
        if ck < 0:
            raise ValueError(f"coefficient c_{k} goes negative ({ck})")
    return c


# -- certified numerics -------------------------------------------------------

def _iv_eval(z: CycRat, prec: int):
    """Interval enclosures (re, im) of z at binary precision prec."""
    iv = mpmath.iv
    old = iv.prec
    try:
        iv.prec = prec
        pi_over_n = iv.pi / z.n
        re = iv.mpf(0)
        im = iv.mpf(0)
        for j, c in enumerate(z.num):
            if c == 0:
                continue
            ang = pi_over_n * j
            re += c * iv.cos(ang)
            im += c * iv.sin(ang)
        den = iv.mpf(z.den)
        return re / den, im / den
    finally:
        iv.prec = old


def _interval_sign(lo: float, hi: float) -> Optional[int]:
    if lo > 0:
        return 1
    if hi < 0:
        return -1
    return None


def _fast_real_sign(z: CycRat) -> Optional[int]:
    """Float evaluation with a rigorous worst-case rounding bound."""
    total = 0.0
    mag = 0
    step = math.pi / z.n
    for j, c in enumerate(z.num):
        if c:
            total += c * math.cos(j * step)
            mag += abs(c)
    # each term: cos error <= 2 ulp, product 1 ulp, summation accumulates
    bound = mag * (len(z.num) + 8) * 1e-15
    if total > bound:
        return 1
    if total < -bound:
        return -1
    return None


def real_sign(x: RealCyc) -> int:
    """Exact sign under the identity embedding zeta_2n -> e^(i*pi/n)."""
    z = x.value
    if z.is_zero():
        return 0
    fast = _fast_real_sign(z)
    if fast is not None:
        return fast
    prec = 64
    while True:
        re, _ = _iv_eval(z, prec)
        s = _interval_sign(float(re.a), float(re.b))
        if s is not None:
            return s
        prec *= 2


def real_cmp(x: RealCyc, y: RealCyc) -> int:
    return real_sign(RealCyc(x.value - y.value))


def to_complex(z: CycRat, precision: float = 1e-12) -> tuple[float, float, float]:
    """(re, im, error bound) with bound <= precision."""
    if precision <= 0:
        raise ValueError("precision must be positive")
    prec = 64
    while True:
        re, im = _iv_eval(z, prec)
        err = max(float(re.delta), float(im.delta))
        if err <= precision:
            return float(re.mid), float(im.mid), err
        prec *= 2


# -- decision procedures ------------------------------------------------------

def is_root_of_unity(z: CycRat) -> Optional[int]:
    """Exponent k in [0, 2n) with z = zeta_2n^k, if z is a root of unity."""
    if z.den != 1:
        return None
    return _context(z.n).root_lookup.get(z.num)


def has_rational_arg(z: CycRat) -> Optional[int]:
    """k in [0, 4n) with arg(z) = k*pi/2n, when arg(z) is a rational angle.

    z/conj(z) = zeta_2n^k0 pins the argument mod pi (half-angle); the lift
    to [0, 4n) is decided by an exact sign in the doubled field Q(zeta_4n).
    """
    if z.is_zero():
        raise ValueError("argument of zero is undefined")
    n = z.n
    zz = z * z
    lam = (z * z.conj()).scale(1)
    k0 = None
    for k in range(2 * n):
        if zz == lam * zeta(n, k):
            k0 = k
            break
    if k0 is None:
        return None
    # arg(z) is k0*pi/2n or k0*pi/2n + pi; test the sign of z * zeta_4n^(-k0).
    big = z.embed(2)
    w = big * zeta(2 * n, -k0)
    s = real_sign(RealCyc(w))
    if s == 0:  # unreachable for z != 0
        raise ArithmeticError("degenerate half-angle resolution")
    return k0 if s > 0 else k0 + 2 * n


# -- JSON literal form --------------------------------------------------------

def to_literal(z: CycRat) -> dict:
    """Cyclotomic literal {"den": d, "terms": [[c, k], ...]}."""
    terms = [[c, j] for j, c in enumerate(z.num) if c]
    return {"den": z.den, "terms": terms}


def from_literal(n: int, lit: dict) -> CycRat:
    if not isinstance(lit, dict) or "terms" not in lit:
        raise ValueError(f"malformed cyclotomic literal: {lit!r}")
    den = int(lit.get("den", 1))
    if den < 1:
        raise ValueError("literal denominator must be >= 1")
    terms = [(int(c), int(k)) for c, k in lit["terms"]]
    return canonicalize(n, terms, den)
