"""Exact arithmetic in the real trigonometric field Q(cos(pi/n), sin(pi/n)).

Values are represented inside the cyclotomic field of conductor N = 4n as
integer coefficient vectors over the power basis 1, z, ..., z^(d-1) of a
primitive N-th root of unity z = exp(2*pi*i/N), with one shared positive
denominator, reduced modulo the N-th cyclotomic polynomial.  Both
cos(k*pi/m) and sin(k*pi/m) are exactly representable whenever 2m divides
N, which covers every coordinate of a Ward surface built from regular
n-gons and a regular 2n-gon.

Public constructors only build values fixed by complex conjugation, so
every element has a well-defined real value.  Signs are decided soundly:
an exact zero test on the canonical coefficient vector first, then interval
evaluation of the real embedding (machine-float enclosures widened by ulp
bumps, escalating to mpmath intervals at doubling precision).  No decision
is ever made from a bare floating-point comparison.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

_INF = math.inf


class FieldError(ValueError):
    """Unrepresentable value, bad parameter, or mixed-context arithmetic."""


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    """Divide integer polynomials exactly (den monic, remainder must vanish)."""
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + dn]
        out[k] = c
        if c:
            for i, di in enumerate(den):
                num[k + i] -= c * di
    if any(num):
        raise ArithmeticError("non-exact polynomial division")
    return out


_CYCLOTOMIC_CACHE: dict[int, tuple[int, ...]] = {}


def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the m-th cyclotomic polynomial."""
    cached = _CYCLOTOMIC_CACHE.get(m)
    if cached is not None:
        return cached
    poly = [-1] + [0] * (m - 1) + [1]
    for d in _divisors(m)[:-1]:
        poly = _polydiv_exact(poly, list(cyclotomic_polynomial(d)))
    result = tuple(poly)
    _CYCLOTOMIC_CACHE[m] = result
    return result


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _dn(x: float) -> float:
    return math.nextafter(x, -_INF)


class FieldContext:
    """Shared descriptor for one field: conductor, minimal polynomial, caches.

    The context is immutable after construction.  Every element refers to
    exactly one context; mixing contexts raises FieldError.
    """

    def __init__(self, n: int, conductor: int | None = None):
        if n < 3:
            raise FieldError(f"need n >= 3, got {n}")
        N = 4 * n if conductor is None else conductor
        if N % (4 * n) != 0:
            raise FieldError(f"conductor {N} must be a multiple of 4n = {4 * n}")
        self.n = n
        self.conductor = N
        self.min_poly = cyclotomic_polynomial(N)
        d = len(self.min_poly) - 1
        self.degree = d

        # x^(d+j) mod min_poly for j = 0..d-2, used to fold products back
        # into the power basis.
        base = [-c for c in self.min_poly[:d]]
        rows = [tuple(base)]
        cur = list(base)
        for _ in range(d - 2):
            lead = cur[-1]
            cur = [0] + cur[:-1]
            if lead:
                cur = [cv + lead * bv for cv, bv in zip(cur, base)]
            rows.append(tuple(cur))
        self._reduction_rows = tuple(rows)

        self._pow_cache: dict[int, tuple[int, ...]] = {}
        self._inv_cache: dict[tuple, FieldElement] = {}
        self._iv_basis_cache: dict[int, list] = {}

        # Float enclosures of Re(z^j) = cos(2*pi*j/N) for the fast sign path.
        with mpmath.workprec(80):
            ball = []
            for j in range(d):
                c = mpmath.cos(2 * mpmath.pi * j / N)
                f = float(c)
                ball.append((_dn(_dn(f)), _up(_up(f))))
        self._ball_basis = tuple(ball)

        self.zero = FieldElement(self, (0,) * d, 1, _normalized=True)
        one = [0] * d
        one[0] = 1
        self.one = FieldElement(self, tuple(one), 1, _normalized=True)

    def __repr__(self):
        return f"FieldContext(n={self.n}, conductor={self.conductor}, degree={self.degree})"

    def __eq__(self, other):
        return self is other or (
            isinstance(other, FieldContext)
            and self.n == other.n
            and self.conductor == other.conductor
        )

    def __hash__(self):
        return hash((self.n, self.conductor))

    # -- constructors -------------------------------------------------

    def rational(self, value) -> FieldElement:
        q = Fraction(value)
        vec = [0] * self.degree
        vec[0] = q.numerator
        return FieldElement(self, tuple(vec), q.denominator)

    def coerce(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise FieldError("mixed field contexts")
            return value
        if isinstance(value, (int, Fraction)):
            return self.rational(value)
        raise TypeError(f"cannot coerce {type(value).__name__} into the field")

    def _zeta_pow(self, e: int) -> tuple[int, ...]:
        """Coefficient vector of z^e reduced to the power basis."""
        e %= self.conductor
        cached = self._pow_cache.get(e)
        if cached is not None:
            return cached
        d = self.degree
        if e < d:
            vec = [0] * d
            vec[e] = 1
            result = tuple(vec)
        else:
            # walk up from the largest cached exponent
            start = max((k for k in self._pow_cache if k < e), default=d - 1)
            if start < d:
                cur = [0] * d
                cur[d - 1] = 1
                start = d - 1
            else:
                cur = list(self._pow_cache[start])
            base = self._reduction_rows[0]
            for _ in range(e - start):
                lead = cur[-1]
                cur = [0] + cur[:-1]
                if lead:
                    cur = [cv + lead * bv for cv, bv in zip(cur, base)]
            result = tuple(cur)
        self._pow_cache[e] = result
        return result

    def _check_angle(self, k: int, d: int) -> int:
        if d <= 0:
            raise FieldError(f"denominator of the angle must be positive, got {d}")
        if self.conductor % (2 * d) != 0:
            raise FieldError(
                f"cos/sin of {k}*pi/{d} is not representable at conductor "
                f"{self.conductor} (need 2*{d} | {self.conductor})"
            )
        return self.conductor // (2 * d)

    def cos_pi(self, k: int, d: int) -> FieldElement:
        """Exact cos(k*pi/d); requires 2d | conductor."""
        m = self._check_angle(k, d)
        e = (k * m) % self.conductor
        a = self._zeta_pow(e)
        b = self._zeta_pow(-e)
        return FieldElement(self, tuple(x + y for x, y in zip(a, b)), 2)

    def sin_pi(self, k: int, d: int) -> FieldElement:
        """Exact sin(k*pi/d); requires 2d | conductor."""
        m = self._check_angle(k, d)
        e = (k * m) % self.conductor
        a = self._zeta_pow(e)
        b = self._zeta_pow(-e)
        diff = [x - y for x, y in zip(a, b)]
        # 1/(2i) = -i/2 = z^(3N/4) / 2
        minus_i = self._zeta_pow(3 * self.conductor // 4)
        vec = _mul_vec(tuple(diff), minus_i, self.degree, self._reduction_rows)
        return FieldElement(self, vec, 2)

    def from_fractions(self, coeffs) -> FieldElement:
        """Element from power-basis coordinates given as Fractions/strings."""
        qs = [Fraction(c) for c in coeffs]
        if len(qs) != self.degree:
            raise FieldError(
                f"expected {self.degree} coordinates, got {len(qs)}"
            )
        den = math.lcm(*(q.denominator for q in qs)) if qs else 1
        num = tuple(q.numerator * (den // q.denominator) for q in qs)
        return FieldElement(self, num, den)

    def _iv_basis(self, prec: int) -> list:
        basis = self._iv_basis_cache.get(prec)
        if basis is None:
            iv = mpmath.iv
            old = iv.prec
            try:
                iv.prec = prec
                pi2 = iv.pi * 2
                basis = [(pi2 * j / self.conductor).cos() for j in range(self.degree)]
            finally:
                iv.prec = old
            self._iv_basis_cache[prec] = basis
        return basis


def _mul_vec(a: tuple, b: tuple, d: int, rows: tuple) -> tuple:
    """Product of two power-basis integer vectors, reduced mod the min poly."""
    conv = [0] * (2 * d - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    conv[i + j] += ai * bj
    for k in range(2 * d - 2, d - 1, -1):
        c = conv[k]
        if c:
            row = rows[k - d]
            for i, ri in enumerate(row):
                if ri:
                    conv[i] += c * ri
    return tuple(conv[:d])


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    q = [Fraction(0)] * max(len(a) - db, 0)
    for k in range(len(q) - 1, -1, -1):
        c = a[k + db] / lead
        q[k] = c
        if c:
            for i, bi in enumerate(b):
                a[k + i] -= c * bi
    while a and a[-1] == 0:
        a.pop()
    return q, a


class FieldElement:
    """One exact field value: integer coordinate vector over a shared basis.

    Immutable and hashable; arithmetic is exact and sign/comparison
    decisions are sound.  Use the FieldContext constructors to build values.
    """

    __slots__ = ("ctx", "num", "den", "_ball", "_inv", "_hash")

    def __init__(self, ctx: FieldContext, num: tuple, den: int, _normalized=False):
        if not _normalized:
            if den == 0:
                raise ZeroDivisionError("field element with zero denominator")
            if den < 0:
                den = -den
                num = tuple(-v for v in num)
            g = math.gcd(den, *num)
            if g > 1:
                den //= g
                num = tuple(v // g for v in num)
        self.ctx = ctx
        self.num = num
        self.den = den
        self._ball = None
        self._inv = None
        self._hash = None

    # -- basic protocol ------------------------------------------------

    def __repr__(self):
        return f"<K{self.ctx.n} ~{self.approx():.10g}>"

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.num, self.den))
        return h

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                return False
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return (
                self.den == q.denominator
                and self.num[0] == q.numerator
                and not any(self.num[1:])
            )
        return NotImplemented

    def __bool__(self):
        return any(self.num)

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise FieldError("mixed field contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return FieldElement(
                self.ctx, tuple(a + b for a, b in zip(self.num, o.num)), self.den
            )
        return FieldElement(
            self.ctx,
            tuple(a * o.den + b * self.den for a, b in zip(self.num, o.num)),
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self):
        e = FieldElement(self.ctx, tuple(-v for v in self.num), self.den, _normalized=True)
        if self._ball is not None:
            lo, hi = self._ball
            e._ball = (-hi, -lo)
        return e

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return FieldElement(
                self.ctx, tuple(a - b for a, b in zip(self.num, o.num)), self.den
            )
        return FieldElement(
            self.ctx,
            tuple(a * o.den - b * self.den for a, b in zip(self.num, o.num)),
            self.den * o.den,
        )

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, int):
            return FieldElement(self.ctx, tuple(v * other for v in self.num), self.den)
        if isinstance(other, Fraction):
            return FieldElement(
                self.ctx,
                tuple(v * other.numerator for v in self.num),
                self.den * other.denominator,
            )
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ctx = self.ctx
        vec = _mul_vec(self.num, o.num, ctx.degree, ctx._reduction_rows)
        return FieldElement(ctx, vec, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ctx.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> FieldElement:
        if self._inv is not None:
            return self._inv
        if not any(self.num):
            raise ZeroDivisionError("inverse of zero field element")
        ctx = self.ctx
        key = (self.num, self.den)
        cached = ctx._inv_cache.get(key)
        if cached is None:
            cached = self._compute_inverse()
            ctx._inv_cache[key] = cached
        self._inv = cached
        cached._inv = self
        return cached

    def _compute_inverse(self) -> FieldElement:
        ctx = self.ctx
        a = [Fraction(v) for v in self.num]
        while a and a[-1] == 0:
            a.pop()
        b = [Fraction(c) for c in ctx.min_poly]
        # extended euclid keeping s with s*a = r (mod min_poly)
        r0, r1 = b, a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            qs1 = [Fraction(0)] * (len(q) + len(s1) - 1)
            for i, qi in enumerate(q):
                if qi:
                    for j, sj in enumerate(s1):
                        qs1[i + j] += qi * sj
            new_s = [x - y for x, y in zip(s0 + [Fraction(0)] * len(qs1), qs1 + [Fraction(0)] * len(s0))]
            while new_s and new_s[-1] == 0:
                new_s.pop()
            s0, s1 = s1, new_s
        if not r1:
            raise ZeroDivisionError("element is not invertible")
        c = r1[0]
        coeffs = [(si / c) * self.den for si in s1]
        coeffs += [Fraction(0)] * (ctx.degree - len(coeffs))
        den = math.lcm(*(q.denominator for q in coeffs))
        num = tuple(q.numerator * (den // q.denominator) for q in coeffs)
        return FieldElement(ctx, num, den)

    # -- queries -----------------------------------------------------------

    def is_rational(self) -> bool:
        """True iff all non-constant power-basis coordinates vanish."""
        return not any(self.num[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise FieldError(f"{self!r} is not rational")
        return Fraction(self.num[0], self.den)

    def to_fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self.den) for v in self.num)

    def conjugate(self) -> FieldElement:
        """Image under complex conjugation (z -> z^-1)."""
        ctx = self.ctx
        d = ctx.degree
        acc = [0] * d
        for j, c in enumerate(self.num):
            if c:
                vec = ctx._zeta_pow(-j)
                for i, vi in enumerate(vec):
                    if vi:
                        acc[i] += c * vi
        return FieldElement(ctx, tuple(acc), self.den)

    def is_real(self) -> bool:
        return self == self.conjugate()

    def _ball_bounds(self) -> tuple[float, float]:
        ball = self._ball
        if ball is None:
            basis = self.ctx._ball_basis
            lo = 0.0
            hi = 0.0
            try:
                for c, (blo, bhi) in zip(self.num, basis):
                    if not c:
                        continue
                    if c >= 0:
                        plo = _dn(_dn(_dn(c * blo)))
                        phi = _up(_up(_up(c * bhi)))
                    else:
                        plo = _dn(_dn(_dn(c * bhi)))
                        phi = _up(_up(_up(c * blo)))
                    lo = _dn(lo + plo)
                    hi = _up(hi + phi)
                d = self.den
                lo = _dn(_dn(lo / d))
                hi = _up(_up(hi / d))
                if math.isnan(lo) or math.isnan(hi):
                    lo, hi = -_INF, _INF
            except OverflowError:
                lo, hi = -_INF, _INF
            ball = (lo, hi)
            self._ball = ball
        return ball

    def sign(self) -> int:
        """Sign of the real value: -1, 0, or +1.  Exact and total."""
        if not any(self.num):
            return 0
        lo, hi = self._ball_bounds()
        if lo > 0.0:
            return 1
        if hi < 0.0:
            return -1
        return self._sign_escalate()

    def _sign_escalate(self) -> int:
        iv = mpmath.iv
        old = iv.prec
        prec = 128
        try:
            while prec <= (1 << 15):
                iv.prec = prec
                basis = self.ctx._iv_basis(prec)
                total = iv.mpf(0)
                for j, c in enumerate(self.num):
                    if c:
                        total += basis[j] * c
                total /= self.den
                if total.a > 0:
                    return 1
                if total.b < 0:
                    return -1
                prec *= 2
        finally:
            iv.prec = old
        raise FieldError(
            "sign undecided at maximal precision; element may not be real"
        )

    def approx(self) -> float:
        """Float approximation of the real value (not for decisions)."""
        lo, hi = self._ball_bounds()
        if math.isinf(lo) or math.isinf(hi):
            with mpmath.workprec(256):
                total = mpmath.mpf(0)
                N = self.ctx.conductor
                for j, c in enumerate(self.num):
                    if c:
                        total += c * mpmath.cos(2 * mpmath.pi * j / N)
                return float(total / self.den)
        return lo + (hi - lo) / 2

    def decimal(self, digits: int = 10) -> str:
        """Decimal rendering at the requested number of significant digits."""
        with mpmath.workprec(64 + 4 * digits):
            total = mpmath.mpf(0)
            N = self.ctx.conductor
            for j, c in enumerate(self.num):
                if c:
                    total += c * mpmath.cos(2 * mpmath.pi * j / N)
            return mpmath.nstr(total / self.den, digits)

    # -- comparisons (exact, total order on real values) -----------------

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self


# -- module-level operation names ------------------------------------------


def make_context(n: int) -> FieldContext:
    """Field context for the Ward surface with parameter n (conductor 4n)."""
    return FieldContext(n)


def trig_cos(ctx: FieldContext, k: int, d: int) -> FieldElement:
    return ctx.cos_pi(k, d)


def trig_sin(ctx: FieldContext, k: int, d: int) -> FieldElement:
    return ctx.sin_pi(k, d)


def is_rational(x: FieldElement) -> bool:
    return x.is_rational()


def as_rational(x: FieldElement) -> Fraction:
    return x.as_rational()


def sign(x: FieldElement) -> int:
    return x.sign()
