"""Moment sums over the edge-band energies and their q -> infinity limits.

All sums are evaluated in extended precision on the already-refined edge
energies; the q^n scaling amplifies absolute root error by q^n, so the
spectra feeding these functions should be computed with at least
``precision.moment_precision(n, q)`` bits.

``extrapolate`` performs generalized Richardson extrapolation.  The default
asymptotic model is a power series in 1/q; the first moment (bandwidth)
empirically carries (log q)^(-3/2)-type corrections from the exponentially
narrow Landau bands at the spectrum edges, so a logarithmic basis is
selected automatically when the sequence decays visibly slower than any
power of 1/q.
"""

from dataclasses import dataclass
from math import comb

from mpmath import mp, mpf, workprec

from .errors import PrecisionExhaustionError

ALTERNATING = "alternating"
HALF_SPECTRUM = "half_spectrum"
BANDWIDTH_POWER = "bandwidth_power"
CROSS = "cross"


@dataclass(frozen=True)
class MomentValue:
    n: int
    q: int
    kind: str
    raw: object  # mpf
    scaled: object  # mpf = q^n * raw
    k: int = None

    def to_jsonable(self, digits=20):
        d = {"kind": self.kind, "n": self.n, "q": self.q,
             "raw": mp.nstr(self.raw, digits), "scaled": mp.nstr(self.scaled, digits)}
        if self.k is not None:
            d["k"] = self.k
        return d


@dataclass(frozen=True)
class LimitEstimate:
    q_list: tuple
    estimates: tuple
    extrapolated: object  # mpf
    error_bar: object  # mpf
    model: str
    n: int = None
    kind: str = None

    def to_jsonable(self, digits=20, reference=None):
        d = {
            "n": self.n, "kind": self.kind, "model": self.model,
            "q_list": list(self.q_list),
            "estimates": [mp.nstr(v, digits) for v in self.estimates],
            "extrapolated": mp.nstr(self.extrapolated, digits),
            "error_bar": mp.nstr(self.error_bar, digits),
        }
        if reference is not None:
            d["reference"] = mp.nstr(mpf(reference), digits)
            d["relative_deviation"] = mp.nstr(
                (self.extrapolated - reference) / reference, 6)
        return d


def _work(spec):
    return max(spec.precision, 128) + 64


def _signed_sum(terms):
    """Sum with each sign class accumulated from small to large magnitude."""
    pos = sorted((t for t in terms if t >= 0))
    neg = sorted((t for t in terms if t < 0), reverse=True)
    return sum(pos, mpf(0)) + sum(neg, mpf(0))


def bandwidth(spec):
    """Total band measure (-1)^(q+1) sum_r (-1)^r (e_r(-4) - e_r(4))."""
    q = spec.q
    with workprec(_work(spec)):
        s = _signed_sum([(-1) ** r * (spec.e_minus[r - 1] - spec.e_plus[r - 1])
                         for r in range(1, q + 1)])
        return (-1) ** (q + 1) * s


def moment_alternating(spec, n):
    """The n-th moment (-1)^(q+1) sum_r (-1)^r (e_r^n(-4) - e_r^n(4)).

    For q odd and n odd this is evaluated through both equivalent forms
    -2 sum (-1)^r e_r^n(4) and +2 sum (-1)^r e_r^n(-4); their agreement is
    the internal cancellation check.  For n even the raw definition is used
    directly (it vanishes up to root accuracy).
    """
    q = spec.q
    with workprec(_work(spec)):
        if n % 2 == 1 and q % 2 == 1:
            plus_form = -2 * _signed_sum([(-1) ** r * spec.e_plus[r - 1] ** n
                                          for r in range(1, q + 1)])
            minus_form = 2 * _signed_sum([(-1) ** r * spec.e_minus[r - 1] ** n
                                          for r in range(1, q + 1)])
            magnitude = sum(abs(e) ** n for e in spec.e_plus)
            tol = max(mpf(1), magnitude) * mpf(2) ** (-spec.precision // 2)
            if abs(plus_form - minus_form) > max(tol, mpf("1e-9") * magnitude):
                raise PrecisionExhaustionError(
                    f"dual forms of the n={n} moment at q={q} disagree by "
                    f"{float(abs(plus_form - minus_form))}")
            raw = (plus_form + minus_form) / 2
        else:
            raw = (-1) ** (q + 1) * _signed_sum(
                [(-1) ** r * (spec.e_minus[r - 1] ** n - spec.e_plus[r - 1] ** n)
                 for r in range(1, q + 1)])
        return MomentValue(n=n, q=q, kind=ALTERNATING, raw=raw,
                           scaled=mpf(q) ** n * raw)


def moment_half_spectrum(spec, n):
    """Half-spectrum n-th moment for q odd and n even.

    -sum_{r<=(q-1)/2} (-1)^r (e_r^n(-4) - e_r^n(4)) + e_{(q+1)/2}^n(s) with
    the middle root taken at side s = (-1)^((q+1)/2) * 4.  Twice its
    q^n-scaled value converges to the same closed form as the odd moments.
    """
    q = spec.q
    if q % 2 == 0:
        raise ValueError("half-spectrum moment requires q odd")
    with workprec(_work(spec)):
        h = (q - 1) // 2
        s = -_signed_sum([(-1) ** r * (spec.e_minus[r - 1] ** n
                                       - spec.e_plus[r - 1] ** n)
                          for r in range(1, h + 1)])
        mid_list = spec.e_plus if (-1) ** ((q + 1) // 2) == 1 else spec.e_minus
        raw = s + mid_list[(q + 1) // 2 - 1] ** n
        return MomentValue(n=n, q=q, kind=HALF_SPECTRUM, raw=raw,
                           scaled=mpf(q) ** n * raw)


def moment_bandwidth_power(spec, n):
    """Bandwidth n-th moment.

    n odd (q odd): (-1)^(q+1) sum_r (-1)^r (e_r(-4) - e_r(4))^n.
    n even (any q): sum_r (e_r(-4) - e_r(4))^n, no alternating sign.
    """
    q = spec.q
    if n % 2 == 1 and q % 2 == 0:
        raise ValueError("odd-n bandwidth power moment requires q odd")
    with workprec(_work(spec)):
        widths = [spec.e_minus[r - 1] - spec.e_plus[r - 1]
                  for r in range(1, q + 1)]
        if n % 2 == 1:
            raw = (-1) ** (q + 1) * _signed_sum(
                [(-1) ** r * widths[r - 1] ** n for r in range(1, q + 1)])
        else:
            raw = _signed_sum([w ** n for w in widths])
        return MomentValue(n=n, q=q, kind=BANDWIDTH_POWER, raw=raw,
                           scaled=mpf(q) ** n * raw)


def moment_cross(spec, n, k):
    """Cross moment -2 sum_r (-1)^r e_r(-4)^k e_r(4)^(n-k), q odd, n odd.

    k = 0 reproduces the alternating n-th moment; the q^n-scaled limit is
    (n-2k)/n times the n-th moment limit.
    """
    q = spec.q
    if q % 2 == 0 or n % 2 == 0:
        raise ValueError("cross moment requires q odd and n odd")
    if not (0 <= k <= (n - 1) // 2):
        raise ValueError(f"cross moment index k must be in 0..{(n - 1) // 2}")
    with workprec(_work(spec)):
        raw = -2 * _signed_sum(
            [(-1) ** r * spec.e_minus[r - 1] ** k * spec.e_plus[r - 1] ** (n - k)
             for r in range(1, q + 1)])
        return MomentValue(n=n, q=q, kind=CROSS, k=k, raw=raw,
                           scaled=mpf(q) ** n * raw)


def expansion_reassembly_defect(spec, n):
    """Defect of the binomial identity linking cross moments to the
    bandwidth power moment (exact algebra at every finite q)."""
    with workprec(_work(spec)):
        total = mpf(0)
        for k in range((n - 1) // 2 + 1):
            total += comb(n, k) * (-1) ** k * moment_cross(spec, n, k).raw
        target = moment_bandwidth_power(spec, n).raw
        scale = max(mpf(1), abs(target))
        return float(abs(total - target) / scale)


def _effective_power(q_list, values):
    """Estimate alpha assuming values ~ L + c * q^(-alpha), from the last
    three entries.  Returns None if the tail is non-monotone."""
    y1, y2, y3 = values[-3:]
    d1, d2 = y2 - y1, y3 - y2
    if d1 == 0 or d2 == 0 or (d1 > 0) != (d2 > 0):
        return None
    q1, q2, q3 = (mpf(q) for q in q_list[-3:])

    def delta_ratio(alpha):
        return ((q3 ** -alpha - q2 ** -alpha) / (q2 ** -alpha - q1 ** -alpha))

    target = d2 / d1
    lo, hi = mpf("0.02"), mpf(8)
    if not (delta_ratio(hi) < target < delta_ratio(lo)):
        return None
    for _ in range(80):
        mid = (lo + hi) / 2
        if delta_ratio(mid) > target:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


def _neville_power(q_list, values):
    xs = [mpf(1) / q for q in q_list]
    tab = list(values)
    last_correction = mpf(0)
    for j in range(1, len(xs)):
        for i in range(len(xs) - 1, j - 1, -1):
            delta = (tab[i] - tab[i - 1]) * xs[i] / (xs[i - j] - xs[i])
            if i == len(xs) - 1:
                last_correction = delta
            tab[i] = tab[i] + delta
    return tab[-1], abs(last_correction)


def _fit_log_basis(q_list, values):
    """Solve values = L + sum_k c_k (log q)^(-3/2-k) exactly on the nodes."""
    m = len(q_list)
    rows = []
    for q in q_list:
        lq = mp.log(mpf(q))
        rows.append([mpf(1)] + [lq ** (mpf(-3) / 2 - k) for k in range(m - 1)])
    sol = mp.lu_solve(mp.matrix(rows), mp.matrix([list(values)]).T)
    return sol[0]


def extrapolate(q_list, values, n=None, kind=None, model="auto"):
    """Generalized Richardson extrapolation of q^n-scaled moment values.

    model: "power" (Neville in 1/q), "log" ((log q)^(-3/2) basis) or "auto".
    A non-monotone tail never raises; it only inflates the error bar.
    """
    if len(q_list) < 3:
        raise ValueError("extrapolation needs at least 3 values")
    if list(q_list) != sorted(set(q_list)):
        raise ValueError("q_list must be strictly increasing")
    with workprec(max(mp.prec, 192)):
        values = [mpf(v) for v in values]
        deltas = [values[i + 1] - values[i] for i in range(len(values) - 1)]
        monotone = all(d > 0 for d in deltas) or all(d < 0 for d in deltas)
        if all(d == 0 for d in deltas):
            return LimitEstimate(q_list=tuple(q_list), estimates=tuple(values),
                                 extrapolated=values[-1], error_bar=mpf(0),
                                 model="constant", n=n, kind=kind)
        chosen = model
        if model == "auto":
            alpha = _effective_power(q_list, values)
            chosen = "log" if (alpha is not None and alpha < 0.6) else "power"
        if chosen == "log":
            ext = _fit_log_basis(q_list, values)
            correction = abs(ext - values[-1]) / 2
        else:
            ext, correction = _neville_power(q_list, values)
        error_bar = max(correction, abs(ext - values[-1]) / 4)
        if not monotone:
            error_bar = max(error_bar, max(abs(d) for d in deltas))
        return LimitEstimate(q_list=tuple(q_list), estimates=tuple(values),
                             extrapolated=ext, error_bar=error_bar,
                             model=chosen, n=n, kind=kind)
