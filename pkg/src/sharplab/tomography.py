"""Deciding equality of doubled processes from finitely many scalars.

For a wire of dimension ``d`` the probe states are

    e_j,  (e_j + e_k)/√2,  (e_j + i e_k)/√2      (j < k)

which is ``d*d`` states whose doubles span the doubled wire.  States are kept
unnormalised alongside their squared norms; the normalised doubles are then
``double(psi) / norm2``, exact on the Gaussian-rational backend.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import prod

import numpy as np

from .errors import TypeMismatch
from .scalars import DEFAULT_TOL, EXACT, FLOAT, GaussianRational, close, format_scalar
from .tensor import (LinearMap, adjoint, compose_par, identity, matmul, matrix_rank,
                     scale, space_type, state)
from .theories import double, doubled_dims, undoubled_dims

LOCAL, GLOBAL = "local", "global"
ANCILLA_DIM = 2


@dataclass(frozen=True)
class ProbeFamily:
    """An informationally complete family of probe states and effects."""

    dims: tuple
    mode: str
    backend: str
    states: tuple          # raw, unnormalised
    norms2: tuple          # squared norm of each raw state
    labels: tuple
    doubled_states: tuple  # normalised doubles
    doubled_effects: tuple  # their Hermitian tests

    @property
    def effects(self):
        """Raw (unnormalised) Hermitian effects of the states."""
        return tuple(adjoint(s) for s in self.states)

    @property
    def local(self):
        return self.mode == LOCAL

    def __len__(self):
        return len(self.states)


def _wire_family(d, backend):
    one = GaussianRational(1) if backend == EXACT else 1.0
    i = GaussianRational(0, 1) if backend == EXACT else 1j
    zero = one * 0
    out = []
    for j in range(d):
        v = [zero] * d
        v[j] = one
        out.append((f"e{j}", v, 1))
    for j in range(d):
        for k in range(j + 1, d):
            v = [zero] * d
            v[j], v[k] = one, one
            out.append((f"e{j}+e{k}", v, 2))
            v = [zero] * d
            v[j], v[k] = one, i
            out.append((f"e{j}+ie{k}", v, 2))
    return out


@lru_cache(maxsize=64)
def probe_family(dims, mode=LOCAL, backend=EXACT):
    """Probe family for wire type ``dims``.

    ``local`` takes products of single-wire families; ``global`` treats the
    composite as one wire of the total dimension.  Informational
    completeness is verified by a rank check before returning.
    """
    dims = space_type(dims)
    if not dims:
        raise ValueError("dims must be nonempty")
    if mode not in (LOCAL, GLOBAL):
        raise ValueError(f"unknown mode {mode!r}")
    wires = [_wire_family(d, backend) for d in dims] if mode == LOCAL \
        else [_wire_family(prod(dims), backend)]
    states, norms, labels = [], [], []
    for combo in product(*wires):
        vec = combo[0][1]
        for _, v, _ in combo[1:]:
            vec = np.kron(np.asarray(vec, dtype=object), np.asarray(v, dtype=object))
        states.append(state(list(np.asarray(vec, dtype=object).reshape(-1)), dims, backend))
        norms.append(prod(n for _, _, n in combo))
        labels.append("⊗".join(f"({lbl})" if "+" in lbl and len(combo) > 1 else lbl
                                for lbl, _, _ in combo))
    doubled = []
    for s, n in zip(states, norms):
        factor = GaussianRational(1, 0) / n if backend == EXACT else 1.0 / n
        doubled.append(scale(factor, double(s)))
    rows = np.stack([d.vector() for d in doubled])
    need = prod(dims) ** 2
    if matrix_rank(rows) != need:
        raise AssertionError(f"probe family for {list(dims)} is not informationally complete")
    return ProbeFamily(dims, mode, backend, tuple(states), tuple(norms), tuple(labels),
                       tuple(doubled), tuple(adjoint(d) for d in doubled))


class TomographyResult:
    """Verdict of :func:`equal_by_tomography`; truthy when equal.

    ``witness`` names the first probe (state label, effect label) on which
    the two processes disagree, with both scalars.
    """

    def __init__(self, equal, probes, witness=None):
        self.equal = equal
        self.probes = probes
        self.witness = witness

    def __bool__(self):
        return self.equal

    def __repr__(self):
        return f"TomographyResult(equal={self.equal}, probes={self.probes}, witness={self.witness})"


def _stack(maps, axis):
    return np.concatenate([m.matrix for m in maps], axis=axis)


def probe_statistics(f, states, effects):
    """Matrix of scalars ``effects[a] ∘ f ∘ states[b]``."""
    s = _stack(states, 1)
    e = _stack(effects, 0)
    m = f.matrix
    if m.dtype != s.dtype:
        s, e, m = (np.asarray(x, dtype=np.complex128) for x in (s, e, m))
    return matmul(matmul(e, m), s)


def equal_by_tomography(f, g, family, tol=DEFAULT_TOL, ancilla=False):
    """Compare two doubled processes through probe scalars only.

    With ``ancilla=True`` both processes are first tensored with the
    identity on an extra dimension-2 wire and probed on the enlarged type,
    standing in for the context system of the global definition.
    """
    if (f.dom, f.cod) != (g.dom, g.cod):
        raise TypeMismatch(f.dom + f.cod, g.dom + g.cod, "equal_by_tomography")
    if f.dom != doubled_dims(family.dims):
        raise TypeMismatch(doubled_dims(family.dims), f.dom, "equal_by_tomography")
    backend = FLOAT if FLOAT in (f.backend, g.backend, family.backend) else EXACT
    in_dims, out_dims = family.dims, undoubled_dims(f.cod)
    if ancilla:
        anc = identity((ANCILLA_DIM ** 2,), backend)
        f, g = compose_par(f, anc), compose_par(g, anc)
        in_dims = in_dims + (ANCILLA_DIM,)
        out_dims = out_dims + (ANCILLA_DIM,)
    fam_in = probe_family(in_dims, family.mode, backend) \
        if (ancilla or backend != family.backend) else family
    fam_out = probe_family(out_dims, family.mode, backend) if out_dims else None
    effects = fam_out.doubled_effects if fam_out else (identity((), backend),)
    effect_labels = fam_out.labels if fam_out else ("1",)
    a = probe_statistics(f, fam_in.doubled_states, effects)
    b = probe_statistics(g, fam_in.doubled_states, effects)
    n = a.size
    for (ei, si), x in np.ndenumerate(a):
        y = b[ei, si]
        if not close(x, y, tol):
            witness = {"state": fam_in.labels[si], "effect": effect_labels[ei],
                       "lhs": format_scalar(x), "rhs": format_scalar(y)}
            return TomographyResult(False, n, witness)
    return TomographyResult(True, n)
