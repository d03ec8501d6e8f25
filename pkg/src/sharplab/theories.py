"""The concrete process theories: raw linear maps, their doubles, and sums.

Doubling sends ``f`` to ``conj(f) ⊗ f``.  Each wire of dimension ``d`` becomes
a single wire of dimension ``d*d`` whose index is ``(conj_index, index)``,
conjugate copy first.  For a map with several wires this is not literally
``np.kron(conj(f), f)``: the two copies are interleaved wire by wire, which
is what makes doubling compatible with ``⊗``.  :func:`naive_to_doubled` and
:func:`doubled_to_naive` convert between the two layouts.

Doubled maps are tagged ``DCLM``; linear combinations of them (mixtures and
general sums) are tagged ``MCLM``.  Both are plain :class:`LinearMap` values.
"""

from fractions import Fraction
from math import isqrt, prod

import numpy as np

from .errors import DegenerateMixture, TypeMismatch, WeightsNotConvex
from .scalars import DEFAULT_TOL, EXACT, FLOAT, GaussianRational, close, exact
from .tensor import (CLM, DCLM, MCLM, LinearMap, add, adjoint, approx_equal,
                     compose_par, compose_seq, conjugate, identity, permute_wires,
                     scale, zero_map)

#: relative threshold on the second singular value for the float purity test
PURITY_RTOL = 1e-7


def doubled_dims(dims):
    return tuple(d * d for d in dims)


def undoubled_dims(dims):
    out = []
    for d in dims:
        r = isqrt(d)
        if r * r != d:
            raise ValueError(f"wire of dimension {d} is not a doubled wire")
        out.append(r)
    return tuple(out)


def naive_to_doubled(naive, cod, dom, theory=DCLM):
    """Interleave a map on ``cod+cod <- dom+dom`` (all conjugate wires first)
    into the per-wire doubled layout."""
    n, m = len(cod), len(dom)
    out_perm = [k for w in range(n) for k in (w, n + w)]
    in_perm = [k for w in range(m) for k in (w, m + w)]
    p = permute_wires(naive, out_perm, in_perm)
    return LinearMap(doubled_dims(dom), doubled_dims(cod), p.matrix, theory)


def doubled_to_naive(m):
    """Inverse of :func:`naive_to_doubled`."""
    cod, dom = undoubled_dims(m.cod), undoubled_dims(m.dom)
    split = LinearMap(tuple(d for d in dom for _ in (0, 1)),
                      tuple(d for d in cod for _ in (0, 1)), m.matrix, CLM)
    n, k = len(cod), len(dom)
    out_perm = [2 * w for w in range(n)] + [2 * w + 1 for w in range(n)]
    in_perm = [2 * w for w in range(k)] + [2 * w + 1 for w in range(k)]
    return permute_wires(split, out_perm, in_perm)


def double(f):
    """The double ``conj(f) ⊗ f`` of a raw linear map, per-wire interleaved."""
    if f.theory != CLM:
        raise ValueError(f"can only double CLM maps, got a {f.theory} map")
    return naive_to_doubled(compose_par(conjugate(f), f), f.cod, f.dom)


def lift(f):
    """Double ``f`` if it is a raw map, otherwise return it unchanged."""
    return double(f) if f.theory == CLM else f


def born_probability(phi, psi):
    """Probability of the test for ``phi`` succeeding on ``psi``: ``|<phi, psi>|^2``.

    Computed in the doubled theory as ``double(phi^†) ∘ double(psi)``.
    """
    if not (phi.is_state and psi.is_state):
        raise ValueError("born_probability expects two states")
    if phi.cod != psi.cod:
        raise TypeMismatch(phi.cod, psi.cod, "born_probability")
    return compose_seq(double(adjoint(phi)), double(psi)).scalar()


def equal_up_to_global_phase(f, g, tol=DEFAULT_TOL):
    if (f.dom, f.cod) != (g.dom, g.cod):
        raise TypeMismatch(f.dom + f.cod, g.dom + g.cod, "equal_up_to_global_phase")
    return approx_equal(double(f), double(g), tol)


def discard_effect(dims, backend=EXACT):
    """The doubled-identity effect on doubled wires over ``dims``.

    On a doubled state it returns the squared norm; it assigns 1 to every
    normalised state.
    """
    return positive_effect(identity(dims, backend))


def positive_effect(op):
    """The doubled effect ``e`` with ``e ∘ double(psi) = <psi, op psi>``."""
    if op.dom != op.cod:
        raise TypeMismatch(op.dom, op.cod, "positive_effect")
    dims = op.dom
    naive = LinearMap(dims + dims, (), op.matrix.reshape(1, -1), CLM)
    return naive_to_doubled(naive, (), dims)


def sum_maps(terms, coefficients=None):
    """Collapse ``sum_i c_i * terms[i]`` into a single ``MCLM`` matrix."""
    terms = list(terms)
    if not terms:
        raise ValueError("sum_maps needs at least one term")
    if coefficients is not None:
        terms = [scale(c, t) for c, t in zip(coefficients, terms, strict=True)]
    total = terms[0]
    for t in terms[1:]:
        total = add(total, t)
    return total.with_theory(MCLM)


def _check_weights(weights, tol, strict=False):
    ws = list(weights)
    is_exact = all(isinstance(w, (int, Fraction, GaussianRational)) for w in ws)
    if is_exact:
        ws = [exact(w) for w in ws]
        if any(not w.is_real() for w in ws):
            raise WeightsNotConvex(f"weights must be real: {ws}")
        reals = [w.real for w in ws]
        if any(r < 0 or (strict and r == 0) for r in reals) or sum(reals) != 1:
            raise WeightsNotConvex(f"weights {[str(r) for r in reals]} are not convex")
    else:
        reals = [float(complex(w).real) for w in ws]
        if any(abs(complex(w).imag) > tol for w in ws) \
                or any(r < -tol or (strict and r <= tol) for r in reals) \
                or abs(sum(reals) - 1) > tol:
            raise WeightsNotConvex(f"weights {reals} are not convex")
    return ws


def is_normalized(doubled_state, tol=DEFAULT_TOL):
    """``discard ∘ state == 1``; for a double this is ``<psi, psi> == 1``."""
    backend = doubled_state.backend
    s = compose_seq(discard_effect(undoubled_dims(doubled_state.cod), backend),
                    doubled_state).scalar()
    return close(s, 1, tol)


def mix(weights, states, tol=DEFAULT_TOL):
    """The mixture ``sum_i p_i double(psi_i)`` of normalised states."""
    states = [lift(s) for s in states]
    if len(states) != len(weights):
        raise ValueError("weights and states differ in length")
    if not states:
        raise ValueError("empty mixture")
    ws = _check_weights(weights, tol)
    for s in states:
        if not s.is_state:
            raise ValueError("mix expects states")
        if s.cod != states[0].cod:
            raise TypeMismatch(states[0].cod, s.cod, "mix")
        if not is_normalized(s, tol):
            raise ValueError("mix expects normalised states")
    return sum_maps(states, ws)


def reshuffle(m):
    """Rearrange a doubled map into the matrix ``R`` with
    ``R[(co, ci), (o, i)] = m[(co, o), (ci, i)]``.

    ``m`` is the double of some ``f`` exactly when ``R = conj(x) x^T`` with
    ``x`` the row-major flattening of ``f``.
    """
    naive = doubled_to_naive(m)
    cod, dom = undoubled_dims(m.cod), undoubled_dims(m.dom)
    n, k = len(cod), len(dom)
    t = naive.matrix.reshape(cod + cod + dom + dom)
    co = list(range(n))
    o = list(range(n, 2 * n))
    ci = list(range(2 * n, 2 * n + k))
    i = list(range(2 * n + k, 2 * n + 2 * k))
    size = prod(cod) * prod(dom)
    return np.transpose(t, co + ci + o + i).reshape(size, size)


def _pivot(r):
    diag = [r[j, j] for j in range(r.shape[0])]
    return max(range(len(diag)), key=lambda j: abs(complex(diag[j])))


def is_pure(m, tol=PURITY_RTOL):
    """Whether ``m`` is the double of a single raw map.

    Exact maps are decided exactly.  Float maps use the singular values of
    the reshuffled matrix (second <= ``tol`` x first) plus a check that the
    rank-one factor has the conjugate-pair shape.
    """
    r = reshuffle(m)
    j = _pivot(r)
    pivot = r[j, j]
    col = r[:, j]
    if m.backend == EXACT:
        if not pivot:
            return m.is_zero()
        if not pivot.is_real() or pivot.real < 0:
            return False
        outer = np.outer(col, np.conjugate(col))
        return bool(np.all(r * pivot == outer))
    r = np.asarray(r, dtype=np.complex128)
    sv = np.linalg.svd(r, compute_uv=False)
    if sv[0] == 0:
        return True
    if len(sv) > 1 and sv[1] > tol * sv[0]:
        return False
    pivot = complex(pivot)
    if abs(pivot.imag) > tol * sv[0] or pivot.real <= 0:
        return False
    outer = np.outer(col, np.conjugate(col))
    return bool(np.max(np.abs(r * pivot - outer)) <= tol * sv[0] * abs(pivot))


def _exact_sqrt(q):
    q = Fraction(q)
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def pure_representative(m, tol=PURITY_RTOL):
    """A raw map ``f`` with ``double(f) == m`` (unique up to global phase).

    Raises :class:`ValueError` when ``m`` is not pure.  On the exact backend
    the normalising square root must be rational; one of the diagonal
    entries of the reshuffled matrix is used for it.
    """
    if not is_pure(m, tol):
        raise ValueError("map is not the double of a single process")
    cod, dom = undoubled_dims(m.cod), undoubled_dims(m.dom)
    r = reshuffle(m)
    if m.is_zero(0.0 if m.backend == FLOAT else tol):
        return zero_map(dom, cod, m.backend)
    if m.backend == EXACT:
        for j in range(r.shape[0]):
            if not r[j, j]:
                continue
            root = _exact_sqrt(r[j, j].real)
            if root is not None:
                x = np.conjugate(r[:, j]) * GaussianRational(1 / root)
                return LinearMap(dom, cod, x.reshape(prod(cod), prod(dom)))
        raise ValueError("no rational normalisation available; convert to float first")
    r = np.asarray(r, dtype=np.complex128)
    j = _pivot(r)
    x = np.conjugate(r[:, j]) / np.sqrt(r[j, j].real)
    return LinearMap(dom, cod, x.reshape(prod(cod), prod(dom)))


def support_projector(states, tol=DEFAULT_TOL):
    """Orthogonal projector onto the span of raw ``states``.

    Gram-Schmidt without normalisation: with orthogonal ``v_k`` and
    ``n_k = <v_k, v_k>`` the projector is ``sum_k v_k v_k^† / n_k``, which
    stays exact on the Gaussian-rational backend.
    """
    basis = []
    dims = states[0].cod
    backend = FLOAT if any(s.backend == FLOAT for s in states) else EXACT
    for s in states:
        v = s if backend == EXACT else s.to_float()
        for b, n in basis:
            coeff = compose_seq(adjoint(b), v).scalar() / n
            v = add(v, scale(-coeff, b))
        n = compose_seq(adjoint(v), v).scalar()
        if (backend == EXACT and n) or (backend == FLOAT and abs(n) > tol):
            basis.append((v, n))
    proj = zero_map(dims, dims, backend)
    for b, n in basis:
        proj = add(proj, scale(1 / n if backend == EXACT else 1 / complex(n),
                               compose_seq(b, adjoint(b))))
    return proj


def distinct_states(states, tol=DEFAULT_TOL):
    """Drop states equal up to global phase to an earlier one."""
    out = []
    for s in states:
        if not any(equal_up_to_global_phase(s, t, tol) for t in out):
            out.append(s)
    return out


def check_proper_mixture(weights, states, tol=DEFAULT_TOL):
    """Validate input for a genuine mixture: strictly positive convex weights
    and at least two distinct normalised raw states."""
    _check_weights(weights, tol, strict=True)
    if len(weights) != len(states):
        raise ValueError("weights and states differ in length")
    if any(s.theory != CLM for s in states):
        raise ValueError("mixture components must be raw (CLM) states")
    if len(distinct_states(states, tol)) < 2:
        raise DegenerateMixture("need at least two distinct states for a proper mixture")
