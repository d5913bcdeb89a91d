import random
from fractions import Fraction

import pytest

from conftest import (
    brute_force_polymatroid,
    perturb_non_polymatroid,
    random_integer_polymatroid,
)
from entronet.exactlog import ZERO, LogScalar, log2_units
from entronet.groupchar import builtin_function
from entronet.setfunc import (
    GroundSet,
    SetFunction,
    adhesion_compatible,
    check_ingleton,
    check_polymatroid,
    check_zhang_yeung,
    conditional_entropy,
    delta,
    flats,
    is_function_of,
    is_independent,
)


def test_polymatroid_checker_agrees_with_brute_force():
    rng = random.Random(7)
    unit = log2_units(1)
    agree_pos = agree_neg = 0
    for _ in range(300):
        n = rng.randint(2, 4)
        ints = [0] + [rng.randint(0, 5) for _ in range((1 << n) - 1)]
        values = [unit * Fraction(v) for v in ints]
        f = SetFunction(GroundSet([str(i + 1) for i in range(n)]), values)
        expected = brute_force_polymatroid(values, n)
        assert check_polymatroid(f).ok == expected
        agree_pos += expected
        agree_neg += not expected
    assert agree_pos > 0 and agree_neg > 0


def test_random_polymatroids_pass_and_perturbations_fail():
    rng = random.Random(11)
    for _ in range(25):
        f = random_integer_polymatroid(rng, rng.randint(2, 4))
        assert check_polymatroid(f).ok
        g = perturb_non_polymatroid(rng, f)
        rep = check_polymatroid(g)
        assert not rep.ok and rep.instances[0].slack.sign() < 0


def test_uniform_matroid_properties():
    # rank function of U_{2,4}: f(S) = min(|S|, 2) in log-2 units
    f = SetFunction.from_log2(
        "1234", {tuple(s): min(len(s), 2) for s in
                 ["1", "2", "3", "4", "12", "13", "14", "23", "24", "34",
                  "123", "124", "134", "234", "1234"]}
    )
    assert check_polymatroid(f).ok
    assert check_ingleton(f).ok
    assert check_zhang_yeung(f).ok
    assert conditional_entropy(f, "3", "12") == ZERO
    assert is_function_of(f, "3", "12")
    assert not is_function_of(f, "2", "1")
    assert is_independent(f, ["1", "2"])
    assert not is_independent(f, ["1", "2", "3"])


def test_restrict_and_flats():
    f = SetFunction.from_log2("abc", {"a": 1, "b": 1, "c": 2, "ab": 2,
                                      "ac": 2, "bc": 2, "abc": 2})
    r = f.restrict("ab")
    assert r.ground.labels == ("a", "b")
    assert r(["a", "b"]) == log2_units(2)
    fl = flats(f)
    assert ("a", "b", "c") in fl and ("a",) in fl
    # f({a,c}) = f({c}), so {c} is not a flat
    assert ("c",) not in fl


def test_delta_and_adhesion_compatible():
    f = SetFunction.from_log2("ab", {"a": 1, "b": 1, "ab": 2})
    assert delta(f, "a", "b") == ZERO  # independent: I(a;b) = 0
    g = SetFunction.from_log2("ab", {"a": 1, "b": 1, "ab": 1})
    assert delta(g, "a", "b") == log2_units(1)
    assert adhesion_compatible(f, f, {"a": "a"})


def test_json_round_trip():
    f = builtin_function("zy")
    g = SetFunction.from_json(f.to_json())
    assert g == f
    with pytest.raises((ValueError, KeyError)):
        SetFunction.from_json({"format": "setfunction/1", "ground": ["1"], "values": {}})


def test_zy_builtin_is_polymatroid_but_not_zy():
    f = builtin_function("zy")
    assert check_polymatroid(f).ok
    rep = check_zhang_yeung(f)
    assert not rep.ok
    assert all(v.slack.sign() < 0 for v in rep.instances)


def test_projective_plane_builtin_violates_ingleton_exactly():
    f = builtin_function("projective-plane")
    assert check_polymatroid(f).ok
    rep = check_ingleton(f)
    assert not rep.ok
    expected = log2_units(3) - LogScalar({3: Fraction(2)})
    first = rep.instances[0]
    assert first.subsets == (("1",), ("2",), ("3",), ("4",))
    assert first.slack == expected


def test_violation_report_shapes():
    g = SetFunction.from_log2("ab", {"a": 2, "b": 1, "ab": 1})
    rep = check_polymatroid(g)
    assert not rep.ok
    j = rep.to_json()
    assert j["format"] == "violationreport/1" and j["instances"]
