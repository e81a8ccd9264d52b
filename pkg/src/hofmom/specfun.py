"""Independent evaluation of the closed-form moment limits.

Everything here is computed from scratch (series, recurrences, quadrature)
rather than delegated to library special functions, so that it can serve as
an independent check of the spectral computation.  The limit constant

    M(n) = (2/pi) * n! * (zeta(n+1, 1/4) - zeta(n+1, 3/4))

is produced through three algebraically equivalent routes (Hurwitz zeta
difference, polygamma at 1/4, accelerated Dirichlet beta series) that must
agree to 1e-12 relative, and for odd n additionally through numerical
quadrature of a log-Gamma integral representation.
"""

from dataclasses import dataclass
from math import comb

from mpmath import mp, mpf, workprec
import mpmath

from .errors import HofmomError, QuadratureError
from .precision import default_precision

MU_LIMIT = 2.54647  # numeric limit of mu_sequence; no closed form is asserted


@dataclass(frozen=True)
class EulerNumbers:
    """Euler numbers E_0..E_kmax from the sech generating function."""

    table: tuple  # exact ints, odd entries zero

    def __getitem__(self, k):
        return self.table[k]

    @property
    def kmax(self):
        return len(self.table) - 1


@dataclass(frozen=True)
class ClosedForm:
    """The moment limit M(n), evaluated via three independent forms."""

    n: int
    value: object  # mpf, consensus value
    via_hurwitz: object
    via_polygamma: object
    via_beta_series: object
    precision: int

    def spread(self):
        vals = (self.via_hurwitz, self.via_polygamma, self.via_beta_series)
        return float((max(vals) - min(vals)) / abs(self.value))

    def to_jsonable(self, digits=20):
        return {
            "n": self.n,
            "value": mp.nstr(self.value, digits),
            "via_hurwitz": mp.nstr(self.via_hurwitz, digits),
            "via_polygamma": mp.nstr(self.via_polygamma, digits),
            "via_beta_series": mp.nstr(self.via_beta_series, digits),
            "spread": self.spread(),
        }


def euler_numbers(kmax):
    """E_0..E_kmax by the binomial recurrence sum_{j even <= k} C(k,j) E_j = [k=0]."""
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    table = [0] * (kmax + 1)
    table[0] = 1
    for k in range(2, kmax + 1, 2):
        table[k] = -sum(comb(k, j) * table[j] for j in range(0, k, 2))
    return EulerNumbers(table=tuple(table))


def _bernoulli(m):
    # mpmath keeps an exact cached table; cheaper and safer than rolling our own
    return mpmath.bernoulli(m)


def hurwitz_zeta(s, a, precision=None):
    """zeta(s, a) = sum_{m>=0} (m+a)^(-s) for s > 1, a > 0.

    Direct summation to a cutoff N plus the Euler-Maclaurin tail
        N^(1-s+...)/(s-1) + (N+a)^(-s)/2 + Bernoulli corrections,
    which converges rapidly once N exceeds the working precision scale.
    """
    precision = precision or default_precision()
    with workprec(precision + 32):
        s = mpf(s)
        a = mpf(a)
        if s <= 1:
            raise ValueError(f"hurwitz_zeta requires s > 1, got s={float(s)}")
        if a <= 0:
            raise ValueError(f"hurwitz_zeta requires a > 0, got a={float(a)}")
        n_direct = max(20, int(mp.prec * 0.7))
        total = mpf(0)
        for m in range(n_direct - 1, -1, -1):
            total += (m + a) ** (-s)
        x = n_direct + a
        # Euler-Maclaurin tail for sum_{m>=n_direct}
        tail = x ** (1 - s) / (s - 1) + x ** (-s) / 2
        term_prev = None
        deriv = s  # s(s+1)...(s+2k-2) accumulated below
        xpow = x ** (-s - 1)
        for k in range(1, mp.prec // 2):
            b = _bernoulli(2 * k)
            term = b / mpmath.factorial(2 * k) * deriv * xpow
            if abs(term) < mp.eps * abs(total + tail):
                tail += term
                break
            if term_prev is not None and abs(term) > abs(term_prev):
                break  # asymptotic series started diverging; stop at the best term
            tail += term
            term_prev = term
            deriv *= (s + 2 * k - 1) * (s + 2 * k)
            xpow /= x * x
        return total + tail


def polygamma_quarter(n, precision=None):
    """psi^(n)(1/4) for n >= 1, via (-1)^(n+1) n! zeta(n+1, 1/4)."""
    if n < 1:
        raise ValueError("polygamma order must be >= 1")
    precision = precision or default_precision()
    with workprec(precision + 32):
        return ((-1) ** (n + 1) * mpmath.factorial(n)
                * hurwitz_zeta(n + 1, mpf(1) / 4, precision=precision))


def dirichlet_beta(s, precision=None):
    """beta(s) = sum_k (-1)^k / (2k+1)^s by accelerated alternating summation.

    Cohen-Villegas-Zagier Chebyshev acceleration: ~0.6 digits per term,
    so 1e-15 needs well under a hundred terms.
    """
    precision = precision or default_precision()
    with workprec(precision + 32):
        s = mpf(s)
        n = int(mp.prec * 0.40) + 10
        d = (3 + mpf(8).sqrt()) ** n
        d = (d + 1 / d) / 2
        b = mpf(-1)
        c = -d
        total = mpf(0)
        for k in range(n):
            c = b - c
            total += c / (2 * k + 1) ** s
            b = b * (2 * (k + n) * (k - n)) / ((2 * k + 1) * (k + 1))
        return total / d


def closed_form_M(n, precision=None):
    """The scaled n-th moment limit M(n), by three independent routes:

    1. (2/pi) n! (zeta(n+1, 1/4) - zeta(n+1, 3/4))          [Hurwitz]
    2. (4/pi) ((-1)^(n-1) psi^(n)(1/4) - 2^n (2^(n+1)-1) zeta(n+1) n!)
    3. (2/pi) 4^(n+1) n! beta(n+1)                           [Dirichlet beta]

    The three values must agree to 1e-12 relative; disagreement indicates a
    special-function bug and is a hard failure, not a warning.
    """
    if n < 1:
        raise ValueError("closed_form_M requires n >= 1")
    precision = precision or default_precision()
    with workprec(precision + 32):
        fact = mpmath.factorial(n)
        via_hurwitz = (2 / mp.pi) * fact * (
            hurwitz_zeta(n + 1, mpf(1) / 4, precision=precision)
            - hurwitz_zeta(n + 1, mpf(3) / 4, precision=precision))
        zeta_n1 = hurwitz_zeta(n + 1, 1, precision=precision)
        via_polygamma = (4 / mp.pi) * (
            (-1) ** (n - 1) * polygamma_quarter(n, precision=precision)
            - mpf(2) ** n * (mpf(2) ** (n + 1) - 1) * zeta_n1 * fact)
        via_beta = (2 / mp.pi) * mpf(4) ** (n + 1) * fact * dirichlet_beta(
            n + 1, precision=precision)
        value = (via_hurwitz + via_polygamma + via_beta) / 3
        spread = float((max(via_hurwitz, via_polygamma, via_beta)
                        - min(via_hurwitz, via_polygamma, via_beta)) / abs(value))
        if spread > 1e-12:
            raise HofmomError(
                f"the three closed forms of M({n}) disagree (relative spread "
                f"{spread:.3e}); special-function implementation is broken")
        return ClosedForm(n=n, value=value, via_hurwitz=via_hurwitz,
                          via_polygamma=via_polygamma, via_beta_series=via_beta,
                          precision=precision)


def thouless_constant(precision=None):
    """The bandwidth limit constant M(1) = (32/pi) * Catalan = 9.3299489..."""
    return closed_form_M(1, precision=precision).value


def even_moment_euler(n):
    """Even-n identity M(n) = 2 |E_n| (2 pi)^n (exact in the Euler number)."""
    if n < 2 or n % 2:
        raise ValueError("even_moment_euler requires even n >= 2")
    en = euler_numbers(n)[n]
    return 2 * abs(en) * (2 * mp.pi) ** n


def mu_sequence(n_terms, precision=None):
    """mu_n = 2^(1-n) pi^n |E_n| / n! for even n up to n_terms (inclusive)."""
    if n_terms % 2 or n_terms < 10:
        raise ValueError("n_terms must be even and >= 10")
    precision = precision or default_precision()
    table = euler_numbers(n_terms)
    with workprec(precision + 32):
        return [(n, mpf(2) ** (1 - n) * mp.pi ** n * abs(table[n])
                 / mpmath.factorial(n))
                for n in range(10, n_terms + 1, 2)]


def mu_constant(n_terms, precision=None):
    """Value of the mu sequence at n = n_terms; converges to ~2.54647."""
    return mu_sequence(n_terms, precision=precision)[-1][1]


ASYMPTOTIC_CROSSOVER = 50


def _integrand_factory(n, prec):
    """Integrand n y^(n-1) g(y) with g the counterterm-corrected log-Gamma term.

    The individual loggamma values grow like y log y while g decays like
    y^(-n-1), so direct evaluation loses about (n+2) log2(y) bits to
    cancellation.  Below the crossover we compensate by boosting the working
    precision; beyond it we switch to the asymptotic Euler-number series
    g(y) = -sum_{k even >= n+1} E_k/(k 4^k y^k), whose optimal truncation
    error ~ exp(-2 pi y) is negligible there.
    """
    table = euler_numbers(max(2 * prec, n + 1, 64))

    def g_asymptotic(y):
        total = mpf(0)
        prev = None
        for k in range(n + 1, table.kmax + 1, 2):
            term = table[k] / (k * mpf(4) ** k * y ** k)
            if prev is not None and abs(term) > abs(prev):
                break
            total -= term
            prev = term
            if abs(term) < mp.eps * max(abs(total), mpf(1e-300)):
                break
        return total

    def integrand(y):
        if y > ASYMPTOTIC_CROSSOVER:
            g = g_asymptotic(y)
        else:
            extra = (n + 3) * max(0, int(mp.mag(y))) + 32
            with workprec(mp.prec + extra):
                g = 2 * (mpmath.loggamma(mpf(3) / 4 + y)
                         - mpmath.loggamma(mpf(1) / 4 + y))
                g -= mpmath.log(y)
                for k in range(2, n, 2):
                    g += table[k] / (k * mpf(4) ** k * y ** k)
            g = +g
        return n * y ** (n - 1) * g

    return integrand


def counterterm_defect(y, k_max):
    """|log(Gamma(3/4+y)^2 / (y Gamma(1/4+y)^2)) + sum_{k even <= k_max} E_k/(k 4^k y^k)|.

    Decays like y^(-k_max-1); used to verify that the polynomial counterterm
    removes the non-decaying part of the large-y expansion.
    """
    table = euler_numbers(max(k_max, 0))
    with workprec(192):
        y = mpf(y)
        g = 2 * (mpmath.loggamma(mpf(3) / 4 + y) - mpmath.loggamma(mpf(1) / 4 + y))
        g -= mpmath.log(y)
        for k in range(2, k_max + 1, 2):
            g += table[k] / (k * mpf(4) ** k * y ** k)
        return float(abs(g))


def moment_integral(n, precision=None, rel_tol=1e-9):
    """M(n) for odd n by adaptive quadrature of the log-Gamma representation

        (8 pi)^(n-1) (-1)^((n-1)/2) * 32 *
            int_0^inf n y^(n-1) (log(Gamma(3/4+y)^2 / (y Gamma(1/4+y)^2))
                                 + sum_{k=2, even}^{n-1} E_k/(k 4^k y^k)) dy.

    The counterterm polynomial cancels the non-integrable part of the
    large-y tail; the prefactor is the real value of (8 pi i)^(n-1) for odd n.
    """
    if n % 2 == 0 or n < 1:
        raise ValueError("moment_integral requires odd n >= 1")
    precision = precision or default_precision()
    with workprec(precision + 32):
        integrand = _integrand_factory(n, mp.prec)
        val, err = mpmath.quad(integrand, [0, 1, 10, mpmath.inf], error=True)
        prefactor = (8 * mp.pi) ** (n - 1) * (-1) ** ((n - 1) // 2) * 32
        result = prefactor * val
        achieved = float(abs(prefactor) * err / max(abs(result), mpf(1)))
        if achieved > rel_tol:
            raise QuadratureError(
                f"moment integral for n={n} converged only to relative error "
                f"{achieved:.3e} (requested {rel_tol:.1e})",
                achieved_error=achieved)
        return result
