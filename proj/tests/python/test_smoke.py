"""Smoke tests for the Python module against the worked fixtures."""

import json

import numpy as np
import pytest

import pflattice as pf

SWAP_DIAG = np.array(
    [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=float
)
ONES = np.ones((4, 4))
TWO_BLOCK = np.array(
    [[1, 1, 1, 1], [1, 1, 1, 1], [1, 1, 2.5, 2.5], [1, 1, 2.5, 2.5]]
)
NIL_SHIFT = np.zeros((4, 4))
NIL_SHIFT[2, 3] = 1.0


def test_spectrum_and_radius():
    rep = pf.spectrum(pf.PosMatrix(SWAP_DIAG))
    assert rep.radius == pytest.approx(1.0)
    assert rep.peripheral_semisimple
    assert sorted(round(ev.real) for ev in rep.eigenvalues) == [-1, 1, 1, 1]
    assert pf.spectral_radius(pf.PosMatrix(ONES)) == pytest.approx(4.0)


def test_posmatrix_rejects_negative_entries():
    with pytest.raises(pf.InvalidArgumentError):
        pf.PosMatrix(np.array([[1.0, -1.0], [0.0, 1.0]]))


def test_peripheral_cycle_structure():
    st = pf.peripheral_cycle_structure(pf.PosMatrix(SWAP_DIAG))
    assert st.rank == 4
    assert st.period == 2
    assert list(st.permutation) == [1, 0, 2, 3]  # 0-based images
    assert np.abs(st.projection - np.eye(4)).max() <= 1e-9


def test_perron_pair():
    pp = pf.perron_pair(pf.PosMatrix(TWO_BLOCK))
    assert pp.radius == pytest.approx(6.0)
    x0 = np.asarray(pp.x0)
    assert x0[2] / x0[0] == pytest.approx(2.0)


def test_irreducibility_certificates():
    cert = pf.is_ideal_irreducible([pf.PosMatrix(ONES)])
    assert cert.irreducible
    red = pf.is_ideal_irreducible([pf.PosMatrix(SWAP_DIAG)])
    assert not red.irreducible
    assert red.witness == [0, 1]


def test_commutant_gap_and_sampling():
    gaps = pf.commutant_equality_gap(pf.PosMatrix(SWAP_DIAG))
    assert gaps.gap_right <= 1e-7
    assert gaps.gap_left <= 1e-7
    exact = pf.commutant_equality_gap_exact(pf.PosMatrix(SWAP_DIAG))
    assert exact == ("0", "0")
    samples = pf.sample_semi_commuting(pf.PosMatrix(SWAP_DIAG), pf.Side.RIGHT, 7, 4)
    assert len(samples.samples) == 4
    assert np.abs(samples.samples[0] - np.eye(4)).max() == 0.0


def test_commuting_eigenvalue_of_the_nilpotent_partner():
    st = pf.peripheral_cycle_structure(pf.PosMatrix(SWAP_DIAG))
    ce = pf.commuting_eigenvalue(pf.PosMatrix(NIL_SHIFT), st)
    assert ce.lambda_ <= 1e-9
    assert np.abs(np.asarray(ce.x) - np.eye(4)[2]).max() < 1e-6
    assert np.abs(np.asarray(ce.xstar) - np.eye(4)[3]).max() < 1e-6


def test_commutator_nilpotency():
    cert = pf.commutator_nilpotency(pf.PosMatrix(ONES), pf.PosMatrix(SWAP_DIAG))
    assert cert.index == 1
    assert cert.radius <= 1e-6
    assert cert.chain.maximal
    upper = pf.PosMatrix(np.array([[1.0, 1.0], [0.0, 1.0]]))
    proj = pf.PosMatrix(np.array([[1.0, 0.0], [0.0, 0.0]]))
    cert2 = pf.commutator_nilpotency(upper, proj)
    assert cert2.index == 2
    assert cert2.chain.links == [[], [0], [0, 1]]


def test_local_spectral_radius():
    lr = pf.local_spectral_radius(pf.PosMatrix(np.diag([2.0, 1.0])), np.array([0.0, 1.0]))
    assert lr.exact == pytest.approx(1.0)


def test_power_dichotomy():
    res = pf.power_dichotomy(pf.PosMatrix(SWAP_DIAG))
    assert res.kind == pf.DichotomyKind.PROJECTION_LIMIT
    assert res.subsequence_period == 2


def test_hypothesis_violation_raises():
    with pytest.raises(pf.HypothesisViolatedError):
        pf.peripheral_cycle_structure(pf.PosMatrix(np.array([[1.0, 1.0], [0.0, 1.0]])))
    with pytest.raises(pf.QuasiNilpotentInputError):
        pf.peripheral_cycle_structure(pf.PosMatrix(np.array([[0.0, 1.0], [0.0, 0.0]])))


def test_theorem_suite_runs_and_is_deterministic():
    ok1, report1 = pf.run_theorem_suite([4], 5, 42)
    ok2, report2 = pf.run_theorem_suite([4], 5, 42)
    assert ok1 and ok2
    a, b = json.loads(report1), json.loads(report2)
    a.pop("wall_time_ms")
    b.pop("wall_time_ms")
    assert a == b
    names = pf.suite_property_names()
    assert "turo" in names and "quasi" in names
