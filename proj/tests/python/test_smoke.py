import math

import numpy as np
import pytest

import netboot

P5 = [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)]


def test_distances_and_denseness():
    d = netboot.distances(5, P5)
    assert d.shape == (5, 5)
    assert d[0, 4] == 4.0
    iso = netboot.distances(3, [(0, 1, 1.0)])
    assert math.isinf(iso[0, 2])
    rep = netboot.denseness(d, 1.0)
    assert rep["delta"] == pytest.approx(2.6)
    assert rep["D"] == 3


def test_overlap_and_hac():
    d = netboot.distances(5, P5)
    om = netboot.overlap_weights(d, 1.0)
    assert om[1, 2] == pytest.approx(10 / 13)
    assert np.linalg.eigvalsh(om).min() > -1e-10
    y = np.array([[1.0], [0.0], [2.0], [0.0], [1.0]])
    assert netboot.hac(y, d, "truncated", 1.0)[0, 0] == pytest.approx(0.112)
    assert netboot.dwb_variance(y, d, 1.0)[0, 0] == pytest.approx(8 / 65)


def test_psd_repair():
    out = netboot.psd_repair(np.array([[1.0, 2.0], [2.0, 1.0]]), 0.1)
    assert np.linalg.eigvalsh(out) == pytest.approx([0.1, 3.0])


def test_bootstrap_is_seeded():
    sim = netboot.simulate("cycle", 50, "cliff_ord", seed=4, lam=0.3)
    y = sim["y"]
    a = netboot.bootstrap("dwb", y, sim["distances"], 2.0, reps=99, seed=1, threads=1)
    b = netboot.bootstrap("dwb", y, sim["distances"], 2.0, reps=99, seed=1, threads=2)
    assert a["t1"] == b["t1"]
    blk = netboot.bootstrap("block", y, sim["distances"], 2.0, reps=99, seed=1, phi="identity")
    assert len(blk["t2"]) == 99
    assert blk["block_count"] == 10


def test_inference_helpers():
    assert netboot.quantile([4.0, 1.0, 3.0, 2.0], 0.5) == 2.0
    assert netboot.dependence_transform_rate(4.0, 2.0, False) == 0.5


def test_diagnostics_and_coverage():
    d = netboot.distances(5, P5)
    rep = netboot.diagnostics(d, 1.0, [1.0, 0.5], 4.0, 4.0, tail="zero")
    assert rep["bb1_a"] > 0
    cov = netboot.coverage("cycle", 30, "constant", seed=2, reps=49, mc_reps=5)
    assert cov["coverage"] == 1.0


def test_errors_carry_codes():
    with pytest.raises(netboot.NetbootError, match="self_loop"):
        netboot.distances(2, [(0, 0, 1.0)])
    with pytest.raises(netboot.NetbootError, match="reps must be"):
        netboot.bootstrap("dwb", np.ones((5, 1)), netboot.distances(5, P5), 1.0, reps=0, seed=1)
