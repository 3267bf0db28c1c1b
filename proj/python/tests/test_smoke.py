import json

import pytest

import hklattice as hk


def test_lattice_basics():
    L = hk.Lattice([[6, 2], [2, -6]], ["g", "lambda"])
    assert L.rank == 2
    assert L.signature == (1, 1)
    assert L.determinant == -40
    assert L.square([1, 2]) == -10
    assert L.invariant_factors() == [2, 20]


def test_isometry_group_d20():
    L = hk.Lattice([[6, 2], [2, -6]])
    A = [[3, -2], [4, -3]]
    B = [[3, 4], [-2, -3]]
    assert L.is_isometry(A) and L.is_isometry(B)
    assert L.generates_isometry_group([A, B])
    assert not L.generates_isometry_group([A])


def test_big_integers_are_exact():
    L = hk.Lattice([[2, 0], [0, -2]])
    x = 10**40 + 7
    assert L.pair([x, 0], [x, 0]) == 2 * x * x


def test_m1_transporter():
    c = hk.builtin_config("c_m1")
    T = c.lattice.transporter(c.cls("g"), c.cls("pullback"))
    assert sorted(T) == sorted([c.matrix("G2"), [[3, 2, 2], [-2, -1, -2], [2, 2, 1]]])
    assert not any(c.is_birational(t) for t in T)


def test_c20_orbits():
    c = hk.builtin_config("c20")
    assert c.chamber_orbits()["count"] == 1
    pol = c.polarization_orbits()
    assert pol["count"] == 2
    assert sorted(pol["representatives"]) == [[1, 0], [3, -2]]
    assert c.heegner_avoidance([3, -2])
    assert sorted(c.chamber_walls([1, 0])) == [[1, 2], [11, -8]]


def test_discriminants():
    v = hk.discriminant_conditions(546)
    assert v["three_star"] and v["witness"] == (1, 16)
    assert not hk.discriminant_conditions(20)["two_star"]


def test_errors():
    with pytest.raises(hk.HklError, match="unavailable"):
        hk.builtin_config("c_nonsyz")
    with pytest.raises(hk.HklError, match="validation"):
        hk.parse_config(hk.builtin_config("c20").dump().replace('"1/5"', '"1/7"'))
    with pytest.raises(hk.HklError, match="unknown scenario"):
        hk.run_scenario("nope")


def test_scenario_report():
    text, code = hk.run_scenario("c20")
    assert code == 0
    report = json.loads(text)
    assert report["summary"]["fail"] == 0
    assert {c["id"] for c in report["checks"]} >= {"bir-subgroup", "nef-walls"}
