"""Dense linear maps between typed composite spaces.

A :class:`LinearMap` is a matrix together with the wire types of its input
and output.  A wire type is a tuple of positive ints, one per wire; the empty
tuple is the monoidal unit.  Composite indices are ordered with the leftmost
wire most significant, which fixes the Kronecker convention.

Exact maps hold numpy object arrays of
:class:`~sharplab.scalars.GaussianRational`; float maps hold ``complex128``
arrays.  Operations on a mix of the two fall back to float.
"""

from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import TypeMismatch
from .scalars import (DEFAULT_TOL, EXACT, FLOAT, ONE, ZERO, GaussianRational,
                      exact, join_exact, split_exact)

CLM, DCLM, MCLM = "CLM", "DCLM", "MCLM"
THEORIES = (CLM, DCLM, MCLM)


def space_type(dims):
    """Normalise and validate a wire type."""
    if isinstance(dims, (int, np.integer)):
        dims = (dims,)
    dims = tuple(int(d) for d in dims)
    for d in dims:
        if d < 1:
            raise ValueError(f"wire dimension must be >= 1, got {d}")
    return dims


def _as_array(entries, backend):
    if backend == EXACT:
        arr = np.array(entries, dtype=object)
        flat = arr.reshape(-1)
        for k, x in enumerate(flat):
            flat[k] = exact(x)
        return arr
    return np.asarray(entries).astype(np.complex128)


@dataclass(frozen=True, eq=False)
class LinearMap:
    """A process: a matrix from ``dom`` to ``cod``.

    ``matrix`` has shape ``(prod(cod), prod(dom))``.  ``theory`` tags which
    process theory the map lives in (``"CLM"``, ``"DCLM"`` or ``"MCLM"``); it
    is bookkeeping only and does not change the arithmetic.
    """

    dom: tuple
    cod: tuple
    matrix: np.ndarray
    theory: str = CLM

    def __post_init__(self):
        object.__setattr__(self, "dom", space_type(self.dom))
        object.__setattr__(self, "cod", space_type(self.cod))
        m = self.matrix
        if not isinstance(m, np.ndarray):
            m = _as_array(m, EXACT)
        elif m.dtype != object and m.dtype != np.complex128:
            m = _as_array(m, EXACT if np.issubdtype(m.dtype, np.integer) else FLOAT)
        m = m.reshape(m.shape if m.ndim == 2 else (prod(self.cod), prod(self.dom)))
        if m.shape != (prod(self.cod), prod(self.dom)):
            raise ValueError(
                f"matrix shape {m.shape} does not match cod {list(self.cod)} x dom {list(self.dom)}")
        if self.theory not in THEORIES:
            raise ValueError(f"unknown theory {self.theory!r}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    # -- shape helpers ---------------------------------------------------

    @property
    def backend(self):
        return EXACT if self.matrix.dtype == object else FLOAT

    @property
    def is_state(self):
        return self.dom == ()

    @property
    def is_effect(self):
        return self.cod == ()

    @property
    def is_scalar(self):
        return self.dom == () and self.cod == ()

    @property
    def shape(self):
        return self.matrix.shape

    def __getitem__(self, idx):
        return self.matrix[idx]

    def scalar(self):
        """The single entry of a 1x1 map."""
        if self.matrix.shape != (1, 1):
            raise ValueError(f"not a scalar: shape {self.matrix.shape}")
        return self.matrix[0, 0]

    def vector(self):
        """Entries of a state (column) or effect (row) as a flat array."""
        return self.matrix.reshape(-1)

    def with_theory(self, theory):
        return LinearMap(self.dom, self.cod, self.matrix, theory)

    def to_float(self):
        if self.backend == FLOAT:
            return self
        return LinearMap(self.dom, self.cod, self.matrix.astype(np.complex128), self.theory)

    def to_exact(self):
        if self.backend == EXACT:
            return self
        return LinearMap(self.dom, self.cod, _as_array(self.matrix, EXACT), self.theory)

    def is_zero(self, tol=DEFAULT_TOL):
        if self.backend == EXACT:
            return not any(bool(x) for x in self.matrix.flat)
        return bool(np.all(np.abs(self.matrix) <= tol))

    # -- operator sugar --------------------------------------------------

    def __matmul__(self, other):
        return compose_seq(self, other)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, -other)

    def __neg__(self):
        return scale(-1, self)

    def __rmul__(self, s):
        return scale(s, self)

    def __repr__(self):
        return (f"LinearMap(dom={list(self.dom)}, cod={list(self.cod)}, "
                f"theory={self.theory}, backend={self.backend})")


# -- constructors ---------------------------------------------------------

def linear_map(entries, dom, cod, backend=EXACT, theory=CLM):
    arr = _as_array(entries, backend)
    return LinearMap(dom, cod, arr.reshape(prod(space_type(cod)), prod(space_type(dom))), theory)


def state(entries, dims=None, backend=EXACT, theory=CLM):
    """A state (column vector) on wire type ``dims`` (defaults to one wire)."""
    arr = _as_array(entries, backend).reshape(-1)
    dims = (arr.size,) if dims is None else dims
    return LinearMap((), dims, arr.reshape(-1, 1), theory)


def effect(entries, dims=None, backend=EXACT, theory=CLM):
    """An effect (row vector) on wire type ``dims``."""
    arr = _as_array(entries, backend).reshape(-1)
    dims = (arr.size,) if dims is None else dims
    return LinearMap(dims, (), arr.reshape(1, -1), theory)


def scalar(value, backend=EXACT, theory=CLM):
    return LinearMap((), (), _as_array([[value]], backend), theory)


def identity(dims, backend=EXACT, theory=CLM):
    dims = space_type(dims)
    n = prod(dims)
    if backend == EXACT:
        m = np.full((n, n), ZERO, dtype=object)
        for k in range(n):
            m[k, k] = ONE
    else:
        m = np.eye(n, dtype=np.complex128)
    return LinearMap(dims, dims, m, theory)


def zero_map(dom, cod, backend=EXACT, theory=CLM):
    dom, cod = space_type(dom), space_type(cod)
    shape = (prod(cod), prod(dom))
    m = np.full(shape, ZERO, dtype=object) if backend == EXACT else np.zeros(shape, np.complex128)
    return LinearMap(dom, cod, m, theory)


def basis_state(k, dim, backend=EXACT, theory=CLM):
    v = [0] * dim
    v[k] = 1
    return state(v, (dim,), backend, theory)


# -- structural operations -------------------------------------------------

def join_theory(a, b):
    """Smallest theory containing both tags (CLM < DCLM < MCLM)."""
    return THEORIES[max(THEORIES.index(a), THEORIES.index(b))]


def _aligned(f, g):
    if f.backend == g.backend:
        return f.matrix, g.matrix
    return f.to_float().matrix, g.to_float().matrix


_FAST_MATMUL = 4096


def _int_parts(m):
    re, im, den = split_exact(m.reshape(-1))
    shape = m.shape
    return (np.array(re, dtype=object).reshape(shape),
            np.array(im, dtype=object).reshape(shape), den)


def matmul(a, b):
    """Matrix product.  Large exact products run on Python-int arrays over a
    common denominator, which avoids a gcd per intermediate term."""
    if a.dtype != object or a.shape[0] * a.shape[1] * b.shape[1] < _FAST_MATMUL:
        return a @ b
    ar, ai, ad = _int_parts(a)
    br, bi, bd = _int_parts(b)
    re = ar @ br - ai @ bi
    im = ar @ bi + ai @ br
    out = np.empty(re.size, dtype=object)
    out[:] = join_exact(re.reshape(-1), im.reshape(-1), ad * bd)
    return out.reshape(re.shape)


def compose_seq(g, f):
    """``g ∘ f``: first ``f`` then ``g``.  Wire types must match exactly."""
    if f.cod != g.dom:
        raise TypeMismatch(g.dom, f.cod, "compose_seq")
    a, b = _aligned(g, f)
    return LinearMap(f.dom, g.cod, matmul(a, b), join_theory(f.theory, g.theory))


def compose_par(h, i):
    """``h ⊗ i``: Kronecker product with concatenated wire types."""
    a, b = _aligned(h, i)
    return LinearMap(h.dom + i.dom, h.cod + i.cod, np.kron(a, b),
                     join_theory(h.theory, i.theory))


def conjugate(f):
    """Entrywise complex conjugate."""
    return LinearMap(f.dom, f.cod, np.conjugate(f.matrix), f.theory)


def transpose(f):
    """Matrix transpose; swaps domain and codomain."""
    return LinearMap(f.cod, f.dom, f.matrix.T.copy(), f.theory)


def adjoint(f):
    """Conjugate transpose, the Hermitian adjoint for the standard inner product."""
    return LinearMap(f.cod, f.dom, np.conjugate(f.matrix.T), f.theory)


def add(f, g):
    if (f.dom, f.cod) != (g.dom, g.cod):
        raise TypeMismatch(f.dom + f.cod, g.dom + g.cod, "add")
    a, b = _aligned(f, g)
    return LinearMap(f.dom, f.cod, a + b, join_theory(f.theory, g.theory))


def scale(s, f):
    """Multiply every entry of ``f`` by scalar ``s``."""
    if f.backend == EXACT and not isinstance(s, (float, complex)):
        return LinearMap(f.dom, f.cod, f.matrix * exact(s), f.theory)
    return LinearMap(f.dom, f.cod, f.to_float().matrix * complex(s), f.theory)


def approx_equal(f, g, tol=DEFAULT_TOL):
    """Same wire types and entries within ``tol`` (exactly, if both are exact)."""
    if f.dom != g.dom or f.cod != g.cod:
        return False
    if f.backend == EXACT and g.backend == EXACT:
        return bool(np.all(f.matrix == g.matrix))
    a, b = _aligned(f, g)
    return bool(np.max(np.abs(a - b), initial=0.0) <= tol)


def max_abs_diff(f, g):
    a, b = f.to_float().matrix, g.to_float().matrix
    return float(np.max(np.abs(a - b), initial=0.0))


def permute_wires(f, out_perm, in_perm):
    """Reorder the wires of ``f``.

    ``out_perm[k]`` names which old output wire becomes new output wire
    ``k``; likewise for inputs.
    """
    t = f.matrix.reshape(f.cod + f.dom)
    nc = len(f.cod)
    axes = list(out_perm) + [nc + p for p in in_perm]
    cod = tuple(f.cod[p] for p in out_perm)
    dom = tuple(f.dom[p] for p in in_perm)
    return LinearMap(dom, cod, np.transpose(t, axes).reshape(prod(cod), prod(dom)), f.theory)


def matrix_rank(m, tol=DEFAULT_TOL):
    """Rank of a 2-d array; Gaussian elimination for exact entries."""
    if m.dtype != object:
        return int(np.linalg.matrix_rank(np.asarray(m, dtype=np.complex128), tol=tol))
    rows = [list(r) for r in m]
    rank = 0
    ncols = m.shape[1] if m.ndim == 2 else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank]
        inv = p[c].reciprocal()
        for r in range(rank + 1, len(rows)):
            if rows[r][c]:
                k = rows[r][c] * inv
                rows[r] = [a - k * b for a, b in zip(rows[r], p)]
        rank += 1
    return rank


def trace_scalar(f):
    """Sum of the diagonal of a square map."""
    return sum(f.matrix[k, k] for k in range(min(f.matrix.shape))) if f.matrix.size else ZERO


__all__ = [
    "CLM", "DCLM", "MCLM", "THEORIES", "LinearMap", "GaussianRational",
    "space_type", "linear_map", "state", "effect", "scalar", "identity",
    "zero_map", "basis_state", "compose_seq", "compose_par", "conjugate",
    "transpose", "adjoint", "add", "scale", "approx_equal", "max_abs_diff",
    "permute_wires", "join_theory", "matrix_rank",
]
