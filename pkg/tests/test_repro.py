from __future__ import annotations

from math import comb

import pytest

from flagcube.repro import (
    c4_bound,
    c4_d_derived_certificate,
    c4_d_printed_certificate,
    c4_free_graphs,
    c4_g_certificate,
    c4_target,
    claw_consequence_membership,
    grigoriev_family,
    grigoriev_poly,
    grigoriev_values,
    monochromatic_triangle_free,
    popcount,
    ramsey33,
    ramsey_generators,
    run_repro,
)
from flagcube.sos.certificate import verify_certificate
from flagcube.sos.ideal import c4free, evaluate_mask, hypercube, variety


def test_ramsey_all_claims():
    res = ramsey33()
    assert res.ok, res.text()
    assert len(res.claims) >= 20


def test_monochromatic_triangle_free_counts():
    assert len(monochromatic_triangle_free(6)) == 0
    assert len(monochromatic_triangle_free(5)) == 12


def test_claw_consequence_is_generated():
    m = claw_consequence_membership(6)
    assert m.holds(ramsey_generators(6))


# known maxima of C4-free edge counts (brute force, frozen)
@pytest.mark.parametrize("n,ex", [(3, 3), (4, 4), (5, 6), (6, 7)])
def test_c4_free_maximum(n, ex):
    assert int(popcount(c4_free_graphs(n)).max()) == ex


def test_c4_enumeration_matches_variety():
    assert sorted(c4_free_graphs(5).tolist()) == list(variety(c4free(5)).points)


@pytest.mark.parametrize("n", [5, 6])
def test_c4_certificates(n):
    t = c4_target(n)
    assert verify_certificate(c4_g_certificate(n), t, c4free(n)).ok
    assert verify_certificate(c4_d_derived_certificate(n), t, c4free(n)).ok


def test_c4_printed_d_version_is_flagged():
    res = c4_bound(5, rediscover=False)
    assert res.ok
    printed = verify_certificate(c4_d_printed_certificate(5), c4_target(5), c4free(5))
    assert not printed.ok
    assert res.data["mismatches"]


def test_c4_bound_values():
    res = c4_bound(6, rediscover=False)
    assert res.ok
    assert res.data["brute_force_max"] == 7
    assert abs(res.data["implied_bound"] - 8.3739) < 1e-3
    with pytest.raises(ValueError):
        c4_bound(8)


def test_c4_target_nonnegative_on_variety():
    for n in (5, 6):
        t = c4_target(n)
        assert all(evaluate_mask(t, g) >= 0 for g in variety(c4free(n)).points)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_grigoriev_bounds(n):
    f = grigoriev_poly(n)
    vals = {evaluate_mask(f, g) for g in variety(hypercube(n)).points}
    assert min(vals) == 0 and max(vals) <= 1
    by = grigoriev_values(n)
    assert by[comb(n, 2) // 2] == 0


def test_grigoriev_family_claims():
    res = grigoriev_family(4)
    assert res.ok, res.text()
    assert res.data["flag_sos_status"] in ("certified", "infeasible_at_degree", "numerically_feasible_only", "solver_limit")
    with pytest.raises(ValueError):
        grigoriev_family(7)


def test_run_repro_dispatch():
    with pytest.raises(ValueError):
        run_repro("bogus")
    r = run_repro("grigoriev:3")
    assert r.name == "grigoriev:3"


def test_result_json():
    import json

    res = grigoriev_family(3)
    d = json.loads(res.to_json())
    assert d["name"] == "grigoriev:3" and all("pass" in c for c in d["claims"])
    assert res.text().endswith("overall: PASS\n")
