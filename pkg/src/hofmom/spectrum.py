"""Edge-band energies e_r(+-4) and the odd-q ++/-- packet split.

The 2q edge energies are the solutions of f(e) = 4 and f(e) = -4.  Both
lists coincide with eigenvalues of Hermitian Harper matrices (at
(kx, ky) = (0, 0) and (pi/q, pi/q) respectively), which provides cheap and
complete double-precision isolation; each root is then polished to the
requested precision with a safeguarded Newton iteration on the Chambers
polynomial.

For q odd, det(m(e,0,0)) factorizes as -det(m++) * det(m--) with
tridiagonal factor matrices of sizes (q+1)/2 and (q-1)/2 coming from the
even/odd folding of the eigenvector; their roots split the e_r(4) list in
two packets whose traces are exactly 2 and -2.
"""

from dataclasses import dataclass

import numpy as np
from mpmath import cos, mp, mpf, pi, workprec

from .charpoly import RationalFlux, charpoly, det_secular, eval_chambers_list
from .errors import RootIsolationError
from .precision import default_precision

_CLUSTER_TOL = 1e-9
_DOMAIN = 4.02  # all edge energies lie in [-4, 4]


@dataclass(frozen=True)
class EdgeSpectrum:
    """Sorted roots of f(e) = +4 and f(e) = -4 (q values each)."""

    flux: RationalFlux
    e_plus: tuple
    e_minus: tuple
    precision: int

    @property
    def q(self):
        return self.flux.q

    def merged(self):
        """All 2q edge energies with their side, sorted ascending."""
        tagged = [(e, +4) for e in self.e_plus] + [(e, -4) for e in self.e_minus]
        tagged.sort(key=lambda t: t[0])
        return tagged

    def to_jsonable(self):
        digits = int(self.precision * 0.30103) + 2
        return {
            "p": self.flux.p,
            "q": self.flux.q,
            "precision_bits": self.precision,
            "e_plus": [mp.nstr(e, digits) for e in self.e_plus],
            "e_minus": [mp.nstr(e, digits) for e in self.e_minus],
            "validated": self.flux.validated,
        }

    def to_csv_rows(self):
        digits = int(self.precision * 0.30103) + 2
        yield ("r", "e_plus", "e_minus")
        for r in range(self.q):
            yield (r + 1, mp.nstr(self.e_plus[r], digits),
                   mp.nstr(self.e_minus[r], digits))


@dataclass(frozen=True)
class PacketSplit:
    """Roots of det(m++) (size (q+1)/2) and det(m--) (size (q-1)/2)."""

    flux: RationalFlux
    epp: tuple
    emm: tuple
    precision: int


def _edge_matrix(flux, side):
    """Hermitian matrix whose eigenvalues are the roots of f(e) = side."""
    p, q = flux.p, flux.q
    if side == 4:
        kx = ky = 0.0
    elif side == -4:
        kx = ky = np.pi / q
    else:
        raise ValueError(f"side must be +4 or -4, got {side}")
    h = np.zeros((q, q), dtype=complex)
    for i in range(q):
        h[i, i] = 2.0 * np.cos(ky + 2.0 * np.pi * p * i / q)
    for i in range(q - 1):
        h[i, i + 1] += 1.0
        h[i + 1, i] += 1.0
    h[0, q - 1] += np.exp(-1j * q * kx)
    h[q - 1, 0] += np.exp(1j * q * kx)
    return h


def _refine_bracket(g, a, b, fa, fb, gprime, prec_bits):
    """Safeguarded Newton inside a sign-changing bracket [a, b]."""
    tol = mpf(2) ** (1 - prec_bits)
    for _ in range(8):
        mid = (a + b) / 2
        fm = g(mid)
        if fm == 0:
            return mid
        if fa * fm < 0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    x = (a + b) / 2
    for _ in range(prec_bits):
        fx = g(x)
        if fx == 0:
            return x
        # fold x into the bracket first, so the bisection fallback below is
        # guaranteed to differ from x and the interval strictly shrinks
        if fa * fx < 0:
            b = x
        else:
            a, fa = x, fx
        dfx = gprime(x)
        x2 = x - fx / dfx if dfx != 0 else (a + b) / 2
        if not (a < x2 < b):
            x2 = (a + b) / 2
        if (abs(x2 - x) < tol * max(mpf(1), abs(x2))
                or b - a < tol * max(mpf(1), abs(x))):
            return x2 if abs(g(x2)) <= abs(fx) else x
        x = x2
    return x


def _newton_extremum(gp, gpp, x0, prec_bits):
    """Locate a stationary point of g near x0 (Newton on g')."""
    x = mpf(x0)
    tol = mpf(2) ** (1 - prec_bits)
    for _ in range(prec_bits):
        d2 = gpp(x)
        if d2 == 0:
            break
        step = gp(x) / d2
        x -= step
        if abs(step) < tol * max(mpf(1), abs(x)):
            break
    return x


def _polish_roots(guesses, g, gprime, gsecond, prec_bits):
    """Refine a sorted list of double-precision guesses to prec_bits.

    Clustered guesses (within _CLUSTER_TOL) are resolved through the local
    extremum of g: a tangency yields a double root, otherwise the extremum
    separates the two simple roots.
    """
    pts = [mpf(-_DOMAIN)] + [mpf(x) for x in guesses] + [mpf(_DOMAIN)]
    roots = []
    i = 1
    while i < len(pts) - 1:
        clustered = (i + 1 < len(pts) - 1
                     and float(pts[i + 1] - pts[i]) < _CLUSTER_TOL)
        a = (pts[i - 1] + pts[i]) / 2
        if clustered:
            b = (pts[i + 1] + pts[i + 2]) / 2
            xstar = _newton_extremum(gprime, gsecond, (pts[i] + pts[i + 1]) / 2,
                                     prec_bits)
            fs = g(xstar)
            fa = g(a)
            if fs == 0 or (fs > 0) == (fa > 0):
                roots.extend([xstar, xstar])  # tangent: double root
            else:
                roots.append(_refine_bracket(g, a, xstar, fa, fs, gprime,
                                             prec_bits))
                roots.append(_refine_bracket(g, xstar, b, fs, g(b), gprime,
                                             prec_bits))
            i += 2
            continue
        b = (pts[i] + pts[i + 1]) / 2
        fa, fb = g(a), g(b)
        if fa * fb > 0:
            raise RootIsolationError(
                f"no sign change around isolated root guess {float(pts[i])}")
        roots.append(_refine_bracket(g, a, b, fa, fb, gprime, prec_bits))
        i += 1
    return sorted(roots)


def edge_energies(cp, side, precision=None):
    """The q roots of f(e) = side (side = +4 or -4), sorted ascending.

    Double roots (tangencies, e.g. the band touching at e = 0 for q even)
    are reported with multiplicity 2.
    """
    precision = precision or cp.precision or default_precision()
    flux, q = cp.flux, cp.q
    guesses = np.sort(np.linalg.eigvalsh(_edge_matrix(flux, side)))
    work = 3 * q + precision + 64
    with workprec(work):
        a = [mpf(x) if not isinstance(x, int) else x for x in cp.a]
        side_mp = mpf(side)

        def g(x):
            return eval_chambers_list(a, q, x, side_mp)

        def gp(x):
            acc = mpf(0)
            for j, aj in enumerate(a):
                k = q - 2 * j
                if k >= 1:
                    acc = acc * x * x + (-aj) * k
            return acc * x ** ((q - 1) % 2)

        def gpp(x):
            acc = mpf(0)
            for j, aj in enumerate(a):
                k = q - 2 * j
                if k >= 2:
                    acc = acc * x * x + (-aj) * k * (k - 1)
            return acc * x ** (q % 2)

        roots = _polish_roots(guesses, g, gp, gpp, precision)
    if len(roots) != q:
        raise RootIsolationError(
            f"isolated {len(roots)} roots of f(e) = {side} for q={q}, expected {q}")
    return roots


def edge_spectrum(flux, precision=None, cp=None):
    """Convenience constructor computing both edge lists."""
    precision = precision or default_precision()
    if cp is None:
        cp = charpoly(flux, precision=precision)
    e_plus = edge_energies(cp, +4, precision=precision)
    e_minus = edge_energies(cp, -4, precision=precision)
    return EdgeSpectrum(flux=flux, e_plus=tuple(e_plus), e_minus=tuple(e_minus),
                        precision=precision)


def _factor_data(flux, sign):
    """Diagonal cosines, end shift and hopping weights of m++ or m--."""
    p, q = flux.p, flux.q
    if q % 2 == 0 or q < 3:
        raise ValueError(f"packet factorization requires odd q >= 3, got q={q}")
    if sign == "++":
        n = (q + 1) // 2
        ms = list(range(n))
        shift, w0 = -1, 2
    elif sign == "--":
        n = (q - 1) // 2
        ms = list(range(1, n + 1))
        shift, w0 = +1, 1
    else:
        raise ValueError(f"sign must be '++' or '--', got {sign!r}")
    return ms, shift, w0


def factor_matrix(flux, e, sign):
    """Dense factor matrix m++(e) or m--(e) as a numpy array (for oracles)."""
    p, q = flux.p, flux.q
    ms, shift, w0 = _factor_data(flux, sign)
    n = len(ms)
    mat = np.zeros((n, n))
    for i, m in enumerate(ms):
        mat[i, i] = e - 2.0 * np.cos(2.0 * np.pi * p * m / q)
    mat[n - 1, n - 1] += shift
    for i in range(n - 1):
        mat[i, i + 1] = 1.0
        mat[i + 1, i] = 1.0
    if n >= 2:
        mat[0, 1] = w0
    return mat


def det_factor(flux, e, sign, precision=None):
    """det(m++(e)) or det(m--(e)) via the tridiagonal continuant, O(q)."""
    precision = precision or default_precision()
    with workprec(2 * flux.q + precision + 64):
        d, _ = _factor_dets(flux, mpf(e), sign)
        return d


def _factor_dets(flux, e, sign):
    """(det, d/de det) of a factor matrix by differentiating the continuant."""
    p, q = flux.p, flux.q
    ms, shift, w0 = _factor_data(flux, sign)
    n = len(ms)
    diag = [e - 2 * cos(2 * pi * p * m / q) for m in ms]
    diag[n - 1] += shift
    dm2, dm1 = mpf(1), diag[0]
    pm2, pm1 = mpf(0), mpf(1)
    for i in range(1, n):
        w = w0 if i == 1 else 1
        nd = diag[i] * dm1 - w * dm2
        npd = dm1 + diag[i] * pm1 - w * pm2
        dm2, pm2 = dm1, pm1
        dm1, pm1 = nd, npd
    return dm1, pm1


def packet_split(flux, precision=None):
    """Roots of the two odd-q factor matrices, refined to `precision` bits.

    Double-precision isolation comes from the symmetrized tridiagonal
    eigenproblem (the single off-diagonal 2/1 pair balances to sqrt(2)).
    """
    precision = precision or default_precision()
    p, q = flux.p, flux.q
    packets = {}
    for sign in ("++", "--"):
        ms, shift, w0 = _factor_data(flux, sign)
        n = len(ms)
        diag = np.array([2.0 * np.cos(2.0 * np.pi * p * m / q) for m in ms])
        diag[n - 1] -= shift  # roots are eigenvalues of C = diag - shift ...
        off = np.ones(n - 1)
        if n >= 2:
            off[0] = np.sqrt(w0)
        sym = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
        guesses = np.sort(np.linalg.eigvalsh(sym))
        with workprec(2 * q + precision + 64):
            def g(x, s=sign):
                return _factor_dets(flux, x, s)[0]

            def gp(x, s=sign):
                return _factor_dets(flux, x, s)[1]

            def gpp(x, s=sign, h=mpf(2) ** (-precision // 3)):
                return (_factor_dets(flux, x + h, s)[1]
                        - _factor_dets(flux, x - h, s)[1]) / (2 * h)

            roots = _polish_roots(guesses, g, gp, gpp, precision)
        if len(roots) != n:
            raise RootIsolationError(
                f"packet {sign} of q={q}: found {len(roots)} roots, expected {n}")
        packets[sign] = tuple(roots)
    return PacketSplit(flux=flux, epp=packets["++"], emm=packets["--"],
                       precision=precision)


def factorization_defect(flux, e, precision=None):
    """Relative defect of det(m(e,0,0)) = -det(m++(e)) det(m--(e)), q odd."""
    precision = precision or default_precision()
    with workprec(3 * flux.q + precision + 64):
        lhs = det_secular(flux, e, 0, 0, precision=precision + 2 * flux.q)
        prod = (_factor_dets(flux, mpf(e), "++")[0]
                * _factor_dets(flux, mpf(e), "--")[0])
        scale = max(mpf(1), abs(lhs), abs(prod))
        return float(abs(lhs + prod) / scale)


def bands(cp, precision=None):
    """The q band intervals {e : |f(e)| <= 4}, sorted, touching allowed."""
    precision = precision or cp.precision or default_precision()
    e_plus = edge_energies(cp, +4, precision=precision)
    e_minus = edge_energies(cp, -4, precision=precision)
    merged = sorted(list(e_plus) + list(e_minus))
    return [(merged[2 * i], merged[2 * i + 1]) for i in range(cp.q)]
