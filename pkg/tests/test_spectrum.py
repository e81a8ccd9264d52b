import numpy as np
import pytest
from mpmath import mp, mpf, sqrt, workprec

from hofmom.charpoly import RationalFlux, charpoly
from hofmom.spectrum import (bands, det_factor, edge_spectrum,
                             factor_matrix, factorization_defect,
                             packet_split)


def approx_set(values, expected, tol=1e-30):
    assert len(values) == len(expected)
    for v, e in zip(sorted(values), sorted(expected)):
        assert abs(mpf(v) - mpf(e)) < tol


def test_q1_edges():
    spec = edge_spectrum(RationalFlux(1, 1))
    approx_set(spec.e_plus, [4])
    approx_set(spec.e_minus, [-4])


def test_q3_edges():
    spec = edge_spectrum(RationalFlux(1, 3))
    with workprec(192):
        s3 = sqrt(mpf(3))
        approx_set(spec.e_plus, [-2, 1 - s3, 1 + s3])
        approx_set(spec.e_minus, [-1 - s3, -1 + s3, 2])


def test_q4_double_root():
    # f(e) = 4 has the tangency e = 0 with multiplicity two
    spec = edge_spectrum(RationalFlux(1, 4))
    with workprec(192):
        s2 = 2 * sqrt(mpf(2))
        approx_set(spec.e_plus, [-s2, 0, 0, s2])
        r1 = sqrt(4 - 2 * sqrt(mpf(2)))
        r2 = sqrt(4 + 2 * sqrt(mpf(2)))
        approx_set(spec.e_minus, [-r2, -r1, r1, r2])


@pytest.mark.parametrize("q", [3, 5, 7, 9, 13, 21, 34, 55])
def test_roots_actually_solve_f(q):
    cp = charpoly(RationalFlux(1, q))
    spec = edge_spectrum(cp.flux, cp=cp)
    from hofmom.charpoly import eval_chambers
    with workprec(256):
        for e in spec.e_plus:
            assert abs(eval_chambers(cp, e) - 4) < mpf("1e-35")
        for e in spec.e_minus:
            assert abs(eval_chambers(cp, e) + 4) < mpf("1e-35")


@pytest.mark.parametrize("q", [3, 7, 15, 31])
def test_odd_q_reflection_symmetry(q):
    spec = edge_spectrum(RationalFlux(1, q))
    for r in range(q):
        assert abs(spec.e_minus[r] + spec.e_plus[q - 1 - r]) < mpf("1e-40")


def test_q3_packets():
    ps = packet_split(RationalFlux(1, 3))
    with workprec(192):
        s3 = sqrt(mpf(3))
        approx_set(ps.epp, [1 - s3, 1 + s3])
        approx_set(ps.emm, [-2])


@pytest.mark.parametrize("q", [3, 5, 9, 15, 27, 51])
def test_packet_traces(q):
    ps = packet_split(RationalFlux(1, q))
    with workprec(192):
        assert abs(sum(ps.epp) - 2) < mpf("1e-40")
        assert abs(sum(ps.emm) + 2) < mpf("1e-40")


@pytest.mark.parametrize("q", [5, 9, 13])
def test_packets_partition_plus_edges(q):
    spec = edge_spectrum(RationalFlux(1, q))
    ps = packet_split(RationalFlux(1, q))
    approx_set(list(ps.epp) + list(ps.emm), list(spec.e_plus), tol=1e-35)


def test_packet_power_sum_trends():
    # (1/q) sum (e++)^2 -> C(2,1)^2/2 = 2 and sum (e++)^3 -> 4^3/2 = 32,
    # monotonically over a growing odd-q sequence
    sq, cu = [], []
    with workprec(192):
        for q in (51, 101, 201):
            ps = packet_split(RationalFlux(1, q))
            sq.append(float(sum(e ** 2 for e in ps.epp) / q))
            cu.append(float(sum(e ** 3 for e in ps.epp)))
    assert abs(sq[-1] - 2) < 0.05
    assert abs(sq[0] - 2) > abs(sq[1] - 2) > abs(sq[2] - 2)
    assert abs(cu[-1] - 32) < 1.0
    assert abs(cu[0] - 32) > abs(cu[1] - 32) > abs(cu[2] - 32)


def test_factor_matrix_det_matches_recurrence():
    rng = np.random.default_rng(3)
    for q in (3, 5, 9, 17):
        flux = RationalFlux(1, q)
        for _ in range(4):
            e = rng.uniform(-4.5, 4.5)
            for sign in ("++", "--"):
                dense = np.linalg.det(factor_matrix(flux, e, sign))
                fast = float(det_factor(flux, e, sign))
                assert abs(dense - fast) < 1e-8 * max(1.0, abs(dense))


@pytest.mark.parametrize("q", [3, 5, 11, 21, 41])
def test_factorization_identity(q):
    rng = np.random.default_rng(q)
    for _ in range(5):
        assert factorization_defect(RationalFlux(1, q),
                                    rng.uniform(-4.5, 4.5)) < 1e-30


def test_bands_are_ordered_and_within_range(tmp_path):
    for q in (4, 7, 12):
        cp = charpoly(RationalFlux(1, q))
        bs = bands(cp)
        assert len(bs) == q
        flat = [x for b in bs for x in b]
        assert flat == sorted(flat)
        assert flat[0] >= -4 and flat[-1] <= 4


def test_packet_split_rejects_even_q():
    with pytest.raises(ValueError):
        packet_split(RationalFlux(1, 4))
