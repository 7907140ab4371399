import numpy as np
import pytest

import cubicslice as cs


def test_period_two_angles():
    assert cs.periodic_angles(2) == ["1/8", "1/4", "3/8", "5/8", "3/4", "7/8"]
    assert len(cs.coperiodic_angles(2)) == 12
    assert cs.mobius_count(3, 3) == len(cs.periodic_angles(3))


def test_basilica_partners():
    assert cs.basilica_partner("1/6") == "5/6"
    assert cs.basilica_partner("1/12") == "11/12"
    with pytest.raises(ValueError):
        cs.basilica_partner("1/5")


def test_lamination_depth():
    lam = cs.lamination(4)
    assert lam["depth"] == 4
    assert ["1/3", "2/3"] in lam["leaves"]


def test_alpha_rays_coland():
    a = cs.trace_dynamical_ray("E2B", 2.0, "0", "1/4")
    b = cs.trace_dynamical_ray("E2B", 2.0, "0", "3/4")
    assert a["status"] == b["status"] == "landed"
    assert abs(complex(*a["endpoint"]) - complex(*b["endpoint"])) < 1e-6


def test_portrait_in_a_wake():
    r = cs.orbit_portrait("E2B", 2.0, "1/16", q=2)
    assert r["status"] == "ok"
    assert ["1/8", "1/4", "3/8", "3/4"] in r["partition"]


def test_portrait_transfer_sample():
    assert cs.quotient_check(2.0, "1/80", q=2)["verdict"] == "confirmed"


def test_psi_lands_in_s2():
    r = cs.psi(2.0, "1/7")
    assert r["psi"]["slice"] == "S2"


def test_tessellation_faces():
    t = cs.tessellate("E1", 2)
    assert len(t["faces"]) == 7
    assert not t["ambiguous"]


def test_suite_single_check():
    rep = cs.run_suite(["exact-combinatorics"])
    assert rep["exit_code"] == 0
    assert [c["name"] for c in rep["checks"]] == ["exact-combinatorics"]


def test_render_slice_centre_bounded():
    img = cs.render_slice("S1", width=65, height=65)
    assert img.shape == (65, 65, 3)
    assert img.dtype == np.uint8
    assert tuple(img[32, 32]) == (30, 30, 30)


def test_render_is_deterministic():
    a = cs.render_julia("E1", 2.0, "0", width=48, height=48, threads=1)
    b = cs.render_julia("E1", 2.0, "0", width=48, height=48, threads=3)
    assert np.array_equal(a, b)


def test_export(tmp_path):
    path = tmp_path / "a2.csv"
    assert cs.export_table("angles", str(path), q=2) == 6
    assert path.read_text().splitlines()[0] == "numerator,denominator,decimal"
