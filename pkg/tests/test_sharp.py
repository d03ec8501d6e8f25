from fractions import Fraction
import math

import numpy as np
import pytest

from sharplab.errors import DegenerateMixture, TypeMismatch, WeightsNotConvex
from sharplab.probes import make_probes
from sharplab.scalars import GaussianRational, exact
from sharplab.sharp import (ANCHORS, AXIOMS, LEMMAS, SharpCandidate, check_axiom,
                            hermitian_candidate, inner_product, mixture_untestability,
                            scale_for_test, transpose_candidate, transpose_counterexample,
                            verify_inner_product, verify_lemma)
from sharplab.tensor import (CLM, MCLM, adjoint, approx_equal, basis_state, effect, identity,
                             linear_map, scalar, scale, state, transpose, zero_map)
from sharplab.theories import double

I = GaussianRational(0, 1)
H, T = hermitian_candidate(), transpose_candidate()
e0, e1 = basis_state(0, 2), basis_state(1, 2)
chi = state([1, I])


@pytest.fixture(scope="module")
def probes2():
    return make_probes((2,), samples=30, seed=3)


@pytest.fixture(scope="module")
def probes2f():
    return make_probes((2,), samples=30, seed=3, backend="float")


def test_candidate_shapes():
    d0 = double(e0)
    t = H.state_sharp(d0)
    assert t.is_effect and t.dom == d0.cod
    # conj(e0)⊗e0 is e_(0,0); its test picks out that entry
    assert list(t.vector()) == [1, 0, 0, 0]
    real = double(state([3, 4]))
    assert approx_equal(T.state_sharp(real), H.state_sharp(real))
    for c in (H, T):
        assert c.scalar_sharp(exact(1)) == 1
    with pytest.raises(TypeMismatch):
        SharpCandidate("bad", lambda f: f)(double(linear_map([[1, 2]], (2,), ())))
    with pytest.raises(ValueError):
        H.state_sharp(identity((4,)))


def test_testability_examples():
    # before doubling: χ†χ = 1 + (-i)(i) = 2, so r² = 1/2
    assert scale_for_test(H, chi) == (2, Fraction(1, 2))
    # the doubled value is the square
    assert scale_for_test(H, double(chi)) == (4, Fraction(1, 4))
    s, r2 = scale_for_test(T, double(chi))
    assert s == 0 and r2 is None
    rep = check_axiom(T, "testability", make_probes((2,), samples=5, seed=0))
    assert not rep.passed and rep.witness["value"] == 0
    assert approx_equal(rep.witness["chi"], scale(exact(Fraction(1, 2)), double(chi)))


def test_testability_on_raw_probes_reports_r_squared():
    p = make_probes((2,), samples=0, theory=CLM)
    rep = check_axiom(H, "testability", p)
    assert rep.passed
    values = {scale_for_test(H, x)[0] for x in p.states + p.extra_states}
    assert values == {1, 2}


def test_sharpness_example_branch():
    phi = state([math.cos(math.pi / 3), math.sin(math.pi / 3)], backend="float")
    d0, dphi = double(e0.to_float()), double(phi)
    v = H.state_sharp(d0).matrix @ dphi.matrix
    assert abs(v[0, 0] - 0.25) < 1e-12


@pytest.mark.parametrize("axiom", AXIOMS)
def test_hermitian_passes_axioms(axiom, probes2, probes2f):
    for p in (probes2, probes2f):
        rep = check_axiom(H, axiom, p)
        assert rep.passed, str(rep)
        assert rep.probes > 0 and rep.anchor == ANCHORS[axiom]


@pytest.mark.parametrize("axiom", AXIOMS)
def test_transpose_axioms(axiom, probes2):
    rep = check_axiom(T, axiom, probes2)
    assert rep.passed == (axiom != "testability")


@pytest.mark.parametrize("lemma", LEMMAS)
def test_lemmas_hold_for_both(lemma, probes2, probes2f):
    for c in (H, T):
        for p in (probes2, probes2f):
            assert verify_lemma(c, lemma, p).passed


def test_lemma_values():
    assert H.scalar_sharp(exact(Fraction(1, 4))) == Fraction(1, 4)
    assert verify_lemma(H, "certainty", make_probes((2,), samples=1)).details["sharp_of_one"] == 1
    rng = np.random.default_rng(0)
    f = double(linear_map(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)), (2,), (2,),
                          "float"))
    assert approx_equal(H(H(f)), f, 0)


def test_broken_candidate_is_caught(probes2):
    # conjugation without transposition is not type-reversing on processes;
    # a candidate that rescales breaks certainty and involution
    doubling = SharpCandidate("twice", lambda f: scale(2, adjoint(f)))
    assert not verify_lemma(doubling, "certainty", probes2).passed
    assert not verify_lemma(doubling, "process_involution", probes2).passed
    assert not check_axiom(doubling, "composability", probes2).passed
    with pytest.raises(ValueError):
        check_axiom(H, "nonsense", probes2)
    with pytest.raises(ValueError):
        verify_lemma(H, "nonsense", probes2)


def test_transpose_counterexample_values():
    rep = transpose_counterexample()
    d = rep.details
    assert d["self_test_psi"] == 1 and d["self_test_phi"] == 1 and d["cross_test"] == 0
    assert d["chi_test"] == 0
    assert d["amplitude_terms"] == [1, 0, 0, -1] and d["amplitude"] == 0
    assert not rep.passed and rep.witness["value"] == 0
    herm = transpose_counterexample(H)
    assert herm.passed and herm.details["amplitude"] == 2 and herm.details["chi_test"] == 4
    assert transpose_counterexample(backend="float").details["chi_test"] == 0


def test_inner_product_examples():
    psi = state([Fraction(3, 5), Fraction(4, 5)])
    assert inner_product(H, psi, psi) == 1
    assert inner_product(H, double(psi), zero_map((), (4,), theory="DCLM")) == 0
    plus = state([1 / math.sqrt(2), 1 / math.sqrt(2)], backend="float")
    assert abs(inner_product(H, e0.to_float(), plus) - 0.5) < 1e-12
    assert abs(inner_product(H, plus, e0.to_float()) - 0.5) < 1e-12
    r = Fraction(3, 7)
    assert inner_product(H, scale(r, psi), scale(r, psi)) == r ** 4
    with pytest.raises(TypeMismatch):
        inner_product(H, e0, basis_state(0, 3))


def test_verify_inner_product(probes2, probes2f):
    for p in (probes2, probes2f):
        assert verify_inner_product(H, p).passed
        rep = verify_inner_product(T, p)
        assert not rep.passed
        assert rep.details == {"symmetry": True, "linearity": True, "positivity": True,
                               "definiteness": False}


def test_mixture_untestability_maximally_mixed():
    half = Fraction(1, 2)
    rep = mixture_untestability([half, half], [e0, e1])
    assert not rep.passed
    rows = {r["effect"]: r for r in rep.details["effects"]}
    assert rows["test of component 0"]["on_mixture"] == half
    assert rows["discard"]["on_mixture"] == 1
    assert rows["discard"]["on_components"] == [1, 1]
    assert rep.details["maximally_mixed"] and rep.details["sharpness_violated"]
    assert rep.details["unique_certain_effect"] == "discard"
    assert all(r["produces_probabilities"] for r in rows.values())


def test_mixture_untestability_general_and_float():
    psi = state([1, I])
    rep = mixture_untestability([Fraction(1, 3), Fraction(2, 3)], [e0, psi], samples=5)
    assert not rep.passed and not rep.details["maximally_mixed"]
    assert "support projector" in rep.details["certain_on_mixture"]
    frep = mixture_untestability([0.25, 0.75], [e0.to_float(), e1.to_float()], samples=5)
    assert not frep.passed


def test_mixture_untestability_rejects_degenerate():
    with pytest.raises(DegenerateMixture):
        mixture_untestability([1], [e0])
    with pytest.raises(DegenerateMixture):
        mixture_untestability([Fraction(1, 2)] * 2, [e0, scale(I, e0)])
    with pytest.raises(WeightsNotConvex):
        mixture_untestability([Fraction(1, 2), Fraction(1, 3)], [e0, e1])


def test_report_serialisation():
    rep = transpose_counterexample()
    d = rep.to_dict()
    assert d["verdict"] == "FAIL" and d["paper_anchor"] == ANCHORS["transpose_counterexample"]
    assert d["witness"]["value"] == "0"
    assert rep.to_json() == transpose_counterexample().to_json()
    assert "transpose/transpose_counterexample: FAIL" in str(rep)


def test_probe_sets_are_deterministic():
    a = make_probes((3,), samples=10, seed=11)
    b = make_probes((3,), samples=10, seed=11)
    c = make_probes((3,), samples=10, seed=12)
    assert all(approx_equal(x, y) for x, y in zip(a.states, b.states))
    assert not all(approx_equal(x, y) for x, y in zip(a.states, c.states))
    assert a.n_family == 9 and len(a.states) == 19


def test_mixed_probe_sets():
    p = make_probes((2,), samples=5, seed=1, theory=MCLM, mixtures=3)
    assert p.labels[-1] == "mixture[2]"
    assert any(f.theory == MCLM for f in p.processes)
    for lemma in ("dagger_seq", "dagger_par", "constraint_C2"):
        assert verify_lemma(H, lemma, p).passed
