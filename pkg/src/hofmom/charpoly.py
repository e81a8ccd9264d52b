"""Secular matrix of the Harper equation at rational flux and its Chambers
polynomial.

For flux 2*pi*p/q the q x q secular matrix m(e, kx, ky) has diagonal
2*cos(ky + 2*pi*p*m/q) - e, unit hoppings on the super/sub diagonals and
corner entries exp(-+ i*q*kx).  Its determinant depends on (kx, ky) only
through 2*(cos(q*kx) + cos(q*ky)) - 4*(-1)^q, so the whole spectrum is
governed by the single polynomial

    f(e) = (-1)^q * det(m(e, 0, 0)) + 4

with coefficients a(2j) defined by f(e) = -sum_j a(2j) * e^(q-2j),
a(0) = -1.  Only exponents of the parity of q appear.

Note: the a(2j) are rational integers for q <= 4 only.  From q = 5 on they
are algebraic numbers (e.g. a(4) = -11.9098... for p/q = 1/5, which equals
the nested sum of 4*sin^2 building blocks one gets by expanding the
determinant).  They are therefore stored as arbitrary-precision reals and
rounded to exact integers only when they are within 1e-9 of one.
"""

import math
from dataclasses import dataclass

import numpy as np
from mpmath import cos, exp, mp, mpc, mpf, pi, workprec

from .errors import PrecisionExhaustionError
from .precision import default_precision

INTEGER_SNAP_TOL = 1e-9


@dataclass(frozen=True)
class RationalFlux:
    """Reduced fraction p/q defining the magnetic flux 2*pi*p/q."""

    p: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"flux denominator must be >= 1, got q={self.q}")
        if not (1 <= self.p <= self.q):
            raise ValueError(f"flux numerator must satisfy 1 <= p <= q, got p={self.p}")
        if self.p == self.q and self.q != 1:
            raise ValueError("flux numerator must satisfy p < q for q > 1")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"flux {self.p}/{self.q} is not reduced")

    @property
    def validated(self):
        """Closed-form limits are only established for p = 1."""
        return self.p == 1


@dataclass(frozen=True)
class CharPoly:
    """Coefficients a(2j), j = 0..q//2, of the Chambers polynomial."""

    flux: RationalFlux
    a: tuple
    precision: int

    @property
    def q(self):
        return self.flux.q

    def coefficient_bits(self):
        """Upper bound on the magnitude (in bits) of the coefficients."""
        m = max(abs(mpf(c)) for c in self.a)
        return int(mp.mag(max(m, mpf(1))))

    def to_jsonable(self):
        coeffs = []
        for c in self.a:
            if isinstance(c, int):
                coeffs.append(c if abs(c) < 2**53 else str(c))
            else:
                coeffs.append(mp.nstr(c, int(self.precision * 0.30103) + 2))
        return {"p": self.flux.p, "q": self.flux.q, "a": coeffs,
                "validated": self.flux.validated}


def secular_matrix(flux, e, kx=0.0, ky=0.0):
    """Dense q x q secular matrix m(e, kx, ky) as a complex numpy array.

    The corner phases are added on top of the tridiagonal part, so for
    q <= 2 (where corner and hopping positions coincide) the entries merge.
    Hermitian when e is real.
    """
    p, q = flux.p, flux.q
    m = np.zeros((q, q), dtype=complex)
    for i in range(q):
        m[i, i] = 2.0 * np.cos(ky + 2.0 * np.pi * p * i / q) - e
    for i in range(q - 1):
        m[i, i + 1] += 1.0
        m[i + 1, i] += 1.0
    m[0, q - 1] += np.exp(-1j * q * kx)
    m[q - 1, 0] += np.exp(1j * q * kx)
    return m


def det_secular(flux, e, kx=0.0, ky=0.0, precision=None):
    """det(m(e, kx, ky)) by the corner-bordered continuant recurrence, O(q).

    For the tridiagonal part T with unit hoppings and corners a, b:
        det = D(0..q-1) - a*b*D(1..q-2) - (-1)^q * (a + b)
    where D are the standard continuants.  Evaluated in mpmath working
    precision; this is what keeps the Chambers defect meaningful at large q,
    where a dense LU determinant in doubles loses everything to cancellation.
    """
    p, q = flux.p, flux.q
    precision = precision or default_precision()
    with workprec(precision + 32):
        e = mpf(e) if not isinstance(e, (mpf, mpc)) else e
        kx = mpf(kx)
        ky = mpf(ky)
        d = [2 * cos(ky + 2 * pi * p * i / q) - e for i in range(q)]
        a = exp(-1j * q * kx)
        b = exp(1j * q * kx)
        if q == 1:
            res = d[0] + a + b
        elif q == 2:
            res = d[0] * d[1] - (1 + a) * (1 + b)
        else:
            dm2, dm1 = mpf(1), d[0]
            for i in range(1, q):
                dm2, dm1 = dm1, d[i] * dm1 - dm2
            em2, em1 = mpf(1), d[1]
            for i in range(2, q - 1):
                em2, em1 = em1, d[i] * em1 - em2
            res = dm1 - a * b * em1 - (-1) ** q * (a + b)
        return res


def det_secular_lu(flux, e, kx=0.0, ky=0.0):
    """Dense LU determinant, double precision.  Slow oracle for q <= ~50."""
    return complex(np.linalg.det(secular_matrix(flux, e, kx, ky)))


def chambers_defect(flux, e, kx, ky, precision=None):
    """Absolute defect of the Chambers identity

    |det(m(e,kx,ky)) - det(m(e,0,0)) + 2*(-1)^q*(cos(q*kx)-1 + cos(q*ky)-1)|

    which is zero for all arguments.
    """
    q = flux.q
    precision = precision or default_precision()
    with workprec(precision + 32):
        lhs = det_secular(flux, e, kx, ky, precision=precision)
        base = det_secular(flux, e, 0, 0, precision=precision)
        corr = 2 * (-1) ** q * (cos(q * mpf(kx)) - 1 + cos(q * mpf(ky)) - 1)
        return float(abs(lhs - base + corr))


def _snap(x):
    r = mp.nint(x)
    if abs(x - r) < INTEGER_SNAP_TOL:
        return int(r)
    return x


def charpoly(flux, precision=None):
    """Coefficients of f(e) = (-1)^q det(m(e,0,0)) + 4 = -sum a(2j) e^(q-2j).

    The determinant is expanded once as a polynomial in e by running the
    continuant recurrence on linear factors (2*cos(2*pi*p*m/q) - e).  The
    working precision grows like 3*q bits because the coefficients do;
    off-parity coefficients must come out as exact zeros and serve as the
    internal consistency guard.
    """
    p, q = flux.p, flux.q
    precision = precision or default_precision()
    work = 3 * q + precision + 64
    with workprec(work):
        c = [2 * cos(2 * pi * p * m / q) for m in range(q)]

        def lin(c0):  # polynomial c0 - e, low -> high degree
            return [c0, mpf(-1)]

        def pmul(u, v):
            out = [mpf(0)] * (len(u) + len(v) - 1)
            for i, ui in enumerate(u):
                for j, vj in enumerate(v):
                    out[i + j] += ui * vj
            return out

        def psub(u, v):
            n = max(len(u), len(v))
            u = u + [mpf(0)] * (n - len(u))
            v = v + [mpf(0)] * (n - len(v))
            return [x - y for x, y in zip(u, v)]

        if q == 1:
            det = [c[0] + 2, mpf(-1)]
        elif q == 2:
            det = psub(pmul(lin(c[0]), lin(c[1])), [mpf(4)])
        else:
            dm2, dm1 = [mpf(1)], lin(c[0])
            for i in range(1, q):
                dm2, dm1 = dm1, psub(pmul(lin(c[i]), dm1), dm2)
            em2, em1 = [mpf(1)], lin(c[1])
            for i in range(2, q - 1):
                em2, em1 = em1, psub(pmul(lin(c[i]), em1), em2)
            inner = em1 if q > 3 else lin(c[1])
            det = psub(psub(dm1, inner), [mpf(2 * (-1) ** q)])

        f = [(-1) ** q * x for x in det]
        f[0] += 4

        # guard: exponents of the wrong parity must vanish
        scale = max(abs(x) for x in f)
        for d in range(q + 1):
            if (q - d) % 2 != 0 and abs(f[d]) > scale * mpf(2) ** (-precision):
                raise PrecisionExhaustionError(
                    f"off-parity coefficient e^{d} of f is {f[d]} for q={q}; "
                    f"raise the working precision")

        a = tuple(_snap(-f[q - 2 * j]) for j in range(q // 2 + 1))

    cp = CharPoly(flux=flux, a=a, precision=precision)
    _check_against_determinant(cp)
    return cp


def _check_against_determinant(cp, points=(0.37, 1.73, 3.91)):
    """Post-condition of charpoly(): (-1)^q f(e) - 4(-1)^q == det(m(e,0,0))."""
    q = cp.q
    with workprec(cp.precision + 3 * q + 64):
        for e in points:
            f = eval_chambers(cp, e)
            det = det_secular(cp.flux, e, 0, 0, precision=cp.precision + 3 * q)
            lhs = (-1) ** q * f - 4 * (-1) ** q
            if abs(lhs - det) > mpf(2) ** (-cp.precision // 2) * max(1, abs(det)):
                raise PrecisionExhaustionError(
                    f"charpoly(q={q}) fails to reproduce det(m(e,0,0)) at e={e}")


def eval_chambers(cp, e, derivative=False):
    """Evaluate f(e) (or f'(e)) by a Horner scheme in x = e^2.

    f(e) = e^(q mod 2) * P(e^2) with P(x) = sum_j (-a_j) x^(q//2 - j).
    Evaluation happens in the caller's mpmath working precision.
    """
    q = cp.q
    e = mpf(e) if not isinstance(e, (mpf, mpc)) else e
    if not derivative:
        x = e * e
        acc = mpf(0)
        for aj in cp.a:
            acc = acc * x - aj
        if q % 2 == 1:
            acc *= e
        return acc
    # f'(e) = e^((q-1) mod 2) * sum_j (-a_j)(q-2j) x^j', Horner in x = e^2
    acc = mpf(0)
    for j, aj in enumerate(cp.a):
        k = q - 2 * j
        if k >= 1:
            acc = acc * e * e + (-aj) * k
    return acc * e ** ((q - 1) % 2)


def eval_chambers_list(a, q, e, side=0):
    """Horner evaluation of f(e) - side from a raw coefficient sequence.

    Used in the root-refinement inner loop where attribute access on the
    dataclass would dominate.
    """
    x = e * e
    acc = mpf(0)
    for aj in a:
        acc = acc * x - aj
    if q % 2 == 1:
        acc *= e
    return acc - side
