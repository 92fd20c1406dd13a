import json

import pytest

import modalk


def test_parse_roundtrip():
    f = modalk.parse("<>p & [](p|q)")
    assert modalk.parse(str(f)) == f
    assert modalk.sig(f) == ["p", "q"]
    assert modalk.size_dag(f) > 0


def test_parse_error():
    with pytest.raises(modalk.ModalError):
        modalk.parse("p &")


def test_nnf_and_polarity():
    f = modalk.nnf(modalk.parse("~<>p"))
    assert str(f) == "[]~p"
    pos, neg = modalk.polarity(modalk.parse("~p | q"))
    assert pos == ["q"] and neg == ["p"]


def test_satisfiable():
    sat, witness = modalk.satisfiable(modalk.parse("<>(p & q)"))
    assert sat
    assert modalk.eval_model(witness, modalk.parse("<>(p & q)"))
    unsat, none_witness = modalk.satisfiable(modalk.parse("<>p & []~p"))
    assert not unsat and none_witness is None


def test_interpolation_methods_agree():
    phi = modalk.parse("<>(p & q)")
    psi = modalk.parse("<>(p | r)")
    assert modalk.valid_implication(phi, psi)
    for method in ("nabla", "automata", "quasimodel", "sequent"):
        theta = modalk.interpolate(method, phi, psi)
        report = modalk.check_craig(theta, phi, psi)
        assert report["craig_ok"], method
        assert modalk.equivalent(theta, modalk.parse("<>p")), method


def test_lyndon_report():
    phi = modalk.parse("<>(p & q)")
    psi = modalk.parse("<>(p | r)")
    theta = modalk.interpolate("quasimodel", phi, psi)
    report = modalk.check_lyndon(theta, phi, psi)
    assert report["lyndon_ok"]


def test_uniform_interpolant():
    u = modalk.uniform_interpolant(modalk.parse("<>(p & q)"), ["p"])
    assert modalk.sig(u) == ["p"]
    assert modalk.equivalent(u, modalk.parse("<>p"))


def test_prove_sequent():
    ok, proof = modalk.prove_sequent(["[]p", "[]q"], ["[](p & q)"])
    assert ok and "R_box" in proof
    bad, _ = modalk.prove_sequent(["p"], ["q"])
    assert not bad


def test_bench_row():
    rows = json.loads(modalk.run_bench(1, ["sequent"]))
    assert len(rows) == 1
    assert rows[0]["verified"]
    assert rows[0]["size_dag"] >= 2


def test_lower_bound_family():
    phi, psi, chi = modalk.lower_bound_family(1)
    assert modalk.valid_implication(phi, psi)
    report = modalk.check_craig(chi, phi, psi)
    assert report["craig_ok"]
