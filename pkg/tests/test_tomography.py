import numpy as np
import pytest
from hypothesis import given, strategies as st

from sharplab.errors import TypeMismatch
from sharplab.scalars import GaussianRational
from sharplab.tensor import approx_equal, identity, linear_map, matrix_rank, scale
from sharplab.theories import double
from sharplab.tomography import equal_by_tomography, probe_family

X = linear_map([[0, 1], [1, 0]], (2,), (2,))
Z = linear_map([[1, 0], [0, -1]], (2,), (2,))


@pytest.mark.parametrize("dims,size", [((2,), 4), ((1,), 1), ((2, 2), 16), ((3,), 9),
                                       ((4,), 16), ((2, 3), 36)])
def test_family_sizes(dims, size):
    fam = probe_family(dims, "local")
    assert len(fam) == size
    rows = np.stack([d.vector() for d in fam.doubled_states])
    assert matrix_rank(rows) == size


def test_qubit_family_contents():
    fam = probe_family((2,), "local")
    assert fam.labels == ("e0", "e1", "e0+e1", "e0+ie1")
    assert fam.norms2 == (1, 1, 2, 2)
    assert fam.states[3].vector()[1] == GaussianRational(0, 1)
    # normalised doubles have unit discard value
    for d in fam.doubled_states:
        assert sum(d.vector()[k] for k in (0, 3)) == 1


def test_global_family_and_products():
    loc = probe_family((2, 2), "local")
    glo = probe_family((2, 2), "global")
    assert len(loc) == len(glo) == 16
    assert "e0⊗(e0+ie1)" in loc.labels
    assert loc.local and not glo.local
    with pytest.raises(ValueError):
        probe_family((), "local")


def test_tomography_examples():
    fam = probe_family((2,), "local")
    f = linear_map([[1, 2], [GaussianRational(0, 1), 0]], (2,), (2,))
    assert equal_by_tomography(double(f), double(scale(GaussianRational(0, 1), f)), fam)
    res = equal_by_tomography(double(X), double(Z), fam)
    assert not res and res.witness["state"] in fam.labels
    assert equal_by_tomography(double(f), double(f), fam, tol=0)
    with pytest.raises(TypeMismatch):
        equal_by_tomography(double(X), identity((9,)), fam)


def test_ancilla_agrees():
    fam = probe_family((2,), "local")
    assert not equal_by_tomography(double(X), double(Z), fam, ancilla=True)
    assert equal_by_tomography(double(X), double(scale(-1, X)), fam, ancilla=True)


@given(st.integers(0, 2 ** 32 - 1), st.booleans(), st.sampled_from([(2,), (2, 2)]))
def test_soundness_and_completeness(seed, same, dims):
    rng = np.random.default_rng(seed)
    n = int(np.prod(dims))
    f = linear_map(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)), dims, dims, "float")
    g = scale(np.exp(1j * rng.uniform(0, 6)), f) if same else \
        linear_map(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)), dims, dims, "float")
    fam = probe_family(dims, "local", "float")
    verdict = bool(equal_by_tomography(double(f), double(g), fam))
    assert verdict == approx_equal(double(f), double(g), 1e-9) == same
