"""Acceptance suite: ten end-to-end criteria tying the spectral computation
to the independently evaluated closed forms.

Each test prints exactly one `[criterion N] PASS|FAIL ...` line (run pytest
with -s or read captured output).  Expensive edge spectra and packet splits
are computed once per session and shared across criteria.

Expect a few minutes of runtime: the q = 801 spectrum alone refines 1602
polynomial roots to 192 bits.
"""

import math
import random
import time

import pytest
from mpmath import mp, mpf, workprec

from hofmom.charpoly import (RationalFlux, chambers_defect, charpoly,
                             det_secular)
from hofmom.moments import (bandwidth, expansion_reassembly_defect,
                            extrapolate, moment_alternating,
                            moment_bandwidth_power, moment_cross,
                            moment_half_spectrum)
from hofmom.specfun import (closed_form_M, dirichlet_beta, euler_numbers,
                            moment_integral, mu_constant, polygamma_quarter)
from hofmom.spectrum import (edge_spectrum, factorization_defect,
                             packet_split)

PRECISION = 192


class _LazyCache:
    def __init__(self, factory):
        self._factory = factory
        self._store = {}

    def __getitem__(self, q):
        if q not in self._store:
            self._store[q] = self._factory(q)
        return self._store[q]


@pytest.fixture(scope="session")
def spectra():
    return _LazyCache(lambda q: edge_spectrum(RationalFlux(1, q),
                                              precision=PRECISION))


@pytest.fixture(scope="session")
def packets():
    return _LazyCache(lambda q: packet_split(RationalFlux(1, q),
                                             precision=PRECISION))


def _report(criterion, ok, detail):
    print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def _rel(x, ref):
    return float(abs(mpf(x) - ref) / abs(ref))


def test_criterion_1_limit_constant_two_forms():
    t0 = time.time()
    with workprec(PRECISION):
        series_form = 32 / mp.pi * dirichlet_beta(2, precision=PRECISION)
        polygamma_form = 4 / mp.pi * (polygamma_quarter(1, precision=PRECISION)
                                      - mp.pi ** 2)
        rel = _rel(series_form, polygamma_form)
    elapsed = time.time() - t0
    ok = rel < 1e-12 and elapsed < 1.0
    _report(1, ok, f"series vs polygamma forms of the first-moment constant: "
                   f"relative gap {rel:.2e} (tol 1e-12), {elapsed:.2f}s (< 1s)")


def test_criterion_2_bandwidth_convergence(spectra):
    q_list = (101, 201, 401, 801)
    ref = closed_form_M(1, precision=PRECISION).value
    with workprec(PRECISION):
        values = [q * bandwidth(spectra[q]) for q in q_list]
        est = extrapolate(q_list, values, n=1, kind="bandwidth")
        dev_ext = _rel(est.extrapolated, ref)
        dev_raw = _rel(values[-1], ref)
    ok = dev_ext < 0.005 and dev_raw < 0.02
    _report(2, ok, f"scaled bandwidth extrapolated ({est.model} model) off by "
                   f"{dev_ext:.2%} (tol 0.5%), raw q=801 off by {dev_raw:.2%} "
                   f"(tol 2%)")


def test_criterion_3_odd_moments(spectra):
    q_list = (101, 201, 401)
    devs = {}
    for n, tol in ((3, 0.01), (5, 0.03)):
        ref = closed_form_M(n, precision=PRECISION).value
        with workprec(PRECISION):
            values = [moment_alternating(spectra[q], n).scaled for q in q_list]
            est = extrapolate(q_list, values, n=n, kind="alternating")
            devs[n] = (_rel(est.extrapolated, ref), tol)
    ok = all(d < tol for d, tol in devs.values())
    _report(3, ok, f"odd scaled moments, extrapolated: n=3 off by "
                   f"{devs[3][0]:.3%} (tol 1%), n=5 off by {devs[5][0]:.3%} "
                   f"(tol 3%)")


def test_criterion_4_even_half_spectrum_moments(spectra):
    q_list = (101, 201, 401)
    with workprec(PRECISION):
        ref2 = 8 * mp.pi ** 2
        vals2 = [2 * moment_half_spectrum(spectra[q], 2).scaled for q in q_list]
        raw_dev = _rel(vals2[-1], ref2)
        ext2 = extrapolate(q_list, vals2, n=2, kind="half_spectrum")
        dev2 = _rel(ext2.extrapolated, ref2)
        ref4 = 10 * (2 * mp.pi) ** 4
        vals4 = [2 * moment_half_spectrum(spectra[q], 4).scaled for q in q_list]
        ext4 = extrapolate(q_list, vals4, n=4, kind="half_spectrum")
        dev4 = _rel(ext4.extrapolated, ref4)
    ok = raw_dev < 0.02 and dev2 < 0.005 and dev4 < 0.02
    _report(4, ok, f"even-n half-spectrum moments: n=2 raw q=401 off by "
                   f"{raw_dev:.2e} (tol 2%), extrapolated {dev2:.2e} "
                   f"(tol 0.5%); n=4 extrapolated {dev4:.2e} (tol 2%)")


def test_criterion_5_packet_square_sums(packets):
    q_list = (101, 201, 401)
    with workprec(PRECISION):
        ref = 4 * mp.pi ** 2
        values = []
        for q in q_list:
            ps = packets[q]
            values.append(mpf(q) ** 2 * (sum(e ** 2 for e in ps.epp)
                                         - sum(e ** 2 for e in ps.emm)))
        est = extrapolate(q_list, values, n=2, kind="packet_square")
        dev = _rel(est.extrapolated, ref)
    ok = dev < 0.01
    _report(5, ok, f"q^2-scaled packet square-sum difference vs 4*pi^2: "
                   f"extrapolated off by {dev:.2e} (tol 1%)")


def test_criterion_6_packet_traces_exact(packets):
    worst = 0.0
    with workprec(PRECISION):
        for q in range(3, 202, 2):
            ps = packets[q]
            worst = max(worst, float(abs(sum(ps.epp) - 2)),
                        float(abs(sum(ps.emm) + 2)))
    ok = worst < 1e-9
    _report(6, ok, f"packet trace sums (+2 / -2) for all odd q <= 201: worst "
                   f"absolute defect {worst:.2e} (tol 1e-9)")


def test_criterion_7_identity_suites(spectra, packets):
    t0 = time.time()
    rng = random.Random(20260824)
    tol = 1e-8
    worst = {}

    d = 0.0
    for _ in range(100):
        q = rng.randint(2, 40)
        flux = RationalFlux(1, q)
        d = max(d, chambers_defect(flux, rng.uniform(-4.5, 4.5),
                                   rng.uniform(0, 6.3), rng.uniform(0, 6.3),
                                   precision=PRECISION))
    worst["k-dependence reduction"] = d

    d = 0.0
    for _ in range(100):
        q = rng.choice(range(3, 42, 2))
        d = max(d, factorization_defect(RationalFlux(1, q),
                                        rng.uniform(-4.5, 4.5),
                                        precision=PRECISION))
    worst["determinant factorization"] = d

    d = 0.0
    with workprec(PRECISION):
        for _ in range(100):
            q = rng.randint(2, 30)
            cp = charpoly(RationalFlux(1, q), precision=PRECISION)
            e = mpf(rng.uniform(1.0, 4.5)) * rng.choice((-1, 1))
            b = -sum(mpf(a) * (1 / e) ** (2 * j) for j, a in enumerate(cp.a))
            lhs = det_secular(cp.flux, e, 0, 0, precision=PRECISION)
            d = max(d, float(abs(lhs + 4 * (-1) ** q
                                 - (-1) ** q * e ** q * b)))
    worst["reciprocal-polynomial form"] = d

    small_odd = [rng.choice(range(3, 62, 2)) for _ in range(100)]
    d = 0.0
    with workprec(PRECISION):
        for q in small_odd:
            spec = spectra[q]
            r = rng.randrange(q)
            d = max(d, float(abs(spec.e_minus[r] + spec.e_plus[q - 1 - r])))
    worst["root reflection symmetry"] = d

    d = 0.0
    with workprec(PRECISION):
        for q in small_odd:
            spec, ps = spectra[q], packets[q]
            n = rng.choice((1, 3, 5))
            lhs = -sum((-1) ** r * spec.e_plus[r - 1] ** n
                       for r in range(1, q + 1))
            rhs = (sum(abs(e) ** n for e in ps.epp)
                   - sum(abs(e) ** n for e in ps.emm))
            d = max(d, float(abs(lhs - rhs)))
    worst["packet absolute-value sum"] = d

    d = 0.0
    for q in small_odd:
        d = max(d, expansion_reassembly_defect(spectra[q],
                                               rng.choice((3, 5))))
    worst["cross-moment reassembly"] = d

    elapsed = time.time() - t0
    ok = all(v <= tol for v in worst.values()) and elapsed < 60
    summary = ", ".join(f"{k}: {v:.1e}" for k, v in worst.items())
    _report(7, ok, f"identity suites (100 cases each, tol 1e-8, "
                   f"{elapsed:.1f}s < 60s): {summary}")


def test_criterion_8_integral_representation():
    t0 = time.time()
    devs = {}
    for n in (1, 3):
        ref = closed_form_M(n, precision=PRECISION).value
        devs[n] = _rel(moment_integral(n, precision=PRECISION), ref)
    elapsed = time.time() - t0
    ok = all(d < 1e-6 for d in devs.values()) and elapsed < 10
    _report(8, ok, f"log-Gamma integral vs closed form: n=1 off by "
                   f"{devs[1]:.1e}, n=3 off by {devs[3]:.1e} (tol 1e-6), "
                   f"{elapsed:.1f}s (< 10s)")


def test_criterion_9_bandwidth_power_vanishing(spectra):
    with workprec(PRECISION):
        scaled = [abs(moment_bandwidth_power(spectra[q], 3).scaled)
                  for q in (51, 101, 201)]
        decreasing = scaled[0] > scaled[1] > scaled[2]
        ref = closed_form_M(3, precision=PRECISION).value / 3
        cross = moment_cross(spectra[401], 3, 1).scaled
        dev = _rel(cross, ref)
    ok = decreasing and dev < 0.10
    _report(9, ok, f"|q^3 * bandwidth-power moment| decreasing: "
                   f"{[f'{float(s):.1f}' for s in scaled]}; cross moment "
                   f"(n=3, k=1) at q=401 off limit/3 by {dev:.2%} (tol 10%)")


def test_criterion_10_euler_numbers_and_mu():
    known = {0: 1, 2: -1, 4: 5, 6: -61, 8: 1385, 10: -50521, 12: 2702765,
             14: -199360981, 16: 19391512145, 18: -2404879675441,
             20: 370371188237525}
    table = euler_numbers(20)
    exact = all(table[k] == v for k, v in known.items()) and \
        all(table[k] == 0 for k in range(1, 20, 2))
    mu = float(mu_constant(40))
    mu_ok = abs(mu - 2.54647) < 5e-5
    ok = exact and mu_ok
    _report(10, ok, f"Euler numbers exact through index 20: {exact}; "
                    f"mu(40) = {mu:.6f} vs 2.54647 (tol 5e-5)")
