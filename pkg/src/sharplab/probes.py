"""Finite probe sets standing in for the universal quantifiers of the axioms.

A probe set has two tiers: the deterministic tomography family for the wire
type, and ``samples`` seeded pseudo-random states and processes.  Random
draws come from :func:`numpy.random.default_rng` (PCG64) seeded with the
given integer, so a probe set is a pure function of its arguments.

Float mode draws Gaussian complex entries.  Exact mode draws Gaussian
integers with real and imaginary parts in ``[-3, 3]`` for states and
``[-2, 2]`` for processes; doubled states are normalised by dividing by the
squared norm, which keeps them exact.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .scalars import EXACT, FLOAT, GaussianRational
from .tensor import (CLM, DCLM, MCLM, LinearMap, identity, linear_map, scale,
                     space_type, state, zero_map)
from .theories import double, doubled_dims, sum_maps
from .tomography import probe_family

N_SCALARS = 50


@dataclass(frozen=True)
class ProbeSet:
    """States, processes and scalars on one wire type, in one theory.

    ``states`` are normalised for the Hermitian norm; ``extra_states`` are
    nonzero unnormalised states (for testability and positivity).
    ``n_family`` leading entries of ``states`` come from the tomography
    family.
    """

    dims: tuple
    theory: str
    backend: str
    seed: int
    states: tuple
    labels: tuple
    n_family: int
    extra_states: tuple
    processes: tuple
    scalars: tuple
    zero: LinearMap

    @property
    def wire_type(self):
        """Type of the states as seen by the candidate (doubled if needed)."""
        return self.states[0].cod

    def state_pairs(self):
        """Index pairs: each state with itself and its successor, plus all
        ordered pairs of family states."""
        n = len(self.states)
        pairs = [(i, i) for i in range(n)] + [(i, (i + 1) % n) for i in range(n) if n > 1]
        fam = range(self.n_family)
        pairs += [(i, j) for i in fam for j in fam if i != j and j != (i + 1) % n]
        return pairs

    def cycled(self, *pools, count=None):
        """Tuples drawn cyclically from several pools, offset by position."""
        count = count if count is not None else max(len(p) for p in pools)
        return [tuple(p[(k + off) % len(p)] for off, p in enumerate(pools))
                for k in range(count)]


def _gaussian_int_vector(rng, n, bound):
    while True:
        re = rng.integers(-bound, bound + 1, size=n)
        im = rng.integers(-bound, bound + 1, size=n)
        if np.any(re) or np.any(im):
            return [GaussianRational(int(a), int(b)) for a, b in zip(re, im)]


def _random_state(rng, n, backend):
    """A raw random state and its squared norm."""
    if backend == EXACT:
        v = _gaussian_int_vector(rng, n, 3)
        return v, sum(x.abs2() for x in v)
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return list(v), float(np.vdot(v, v).real)


def _random_process(rng, n, backend):
    if backend == EXACT:
        return np.array(_gaussian_int_vector(rng, n * n, 2), dtype=object).reshape(n, n)
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def _rational_sqrt(q):
    q = Fraction(q)
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    return Fraction(a, b) if (a * a, b * b) == (q.numerator, q.denominator) else None


def _normalised(raw, norm2, dims, backend, theory):
    """Normalised state in ``theory`` from a raw vector, or None when the
    exact backend would need an irrational factor."""
    psi = state(raw, dims, backend)
    if theory == CLM:
        if backend == FLOAT:
            return scale(1 / np.sqrt(norm2), psi)
        root = _rational_sqrt(norm2)
        return None if root is None else scale(GaussianRational(1 / root), psi)
    d = double(psi)
    factor = GaussianRational(1 / Fraction(norm2)) if backend == EXACT else 1 / norm2
    return scale(factor, d).with_theory(theory)


def make_probes(dims=(2,), samples=200, seed=0, backend=EXACT, theory=DCLM,
                family=True, mixtures=0):
    """Build a :class:`ProbeSet` on raw wire type ``dims``.

    ``theory`` is ``DCLM`` (default), ``MCLM`` or ``CLM``.  With ``CLM`` the
    probes are raw vectors; in exact mode only vectors with a rational norm
    can be normalised, and random draws are resampled until they have one.
    ``mixtures`` adds that many proper mixtures of pairs of random states
    (only meaningful in ``MCLM``).
    """
    dims = space_type(dims)
    n = 1
    for d in dims:
        n *= d
    rng = np.random.default_rng(seed)
    states, labels, extra = [], [], []
    if family:
        fam = probe_family(dims, "local", backend)
        for raw, n2, lbl in zip(fam.states, fam.norms2, fam.labels):
            psi = _normalised(raw.vector(), n2, dims, backend, theory)
            if psi is None:
                extra.append(raw)
            else:
                states.append(psi)
                labels.append(lbl)
    n_family = len(states)
    raws = []
    while len(raws) < samples:
        raw, n2 = _random_state(rng, n, backend)
        psi = _normalised(raw, n2, dims, backend, theory)
        if psi is None:
            continue
        raws.append((raw, n2))
        states.append(psi)
        labels.append(f"random[{len(raws) - 1}]")
    for raw, n2 in raws:
        psi = state(raw, dims, backend)
        extra.append(psi if theory == CLM else double(psi).with_theory(theory))
    for k in range(mixtures):
        (a, na), (b, nb) = raws[k % len(raws)], raws[(k + 1) % len(raws)]
        p = Fraction(k % 3 + 1, 4) if backend == EXACT else float(rng.uniform(0.1, 0.9))
        da = _normalised(a, na, dims, backend, DCLM)
        db = _normalised(b, nb, dims, backend, DCLM)
        states.append(sum_maps([da, db], [p, 1 - p]))
        labels.append(f"mixture[{k}]")

    pdims = dims if theory == CLM else doubled_dims(dims)
    processes = [identity(pdims, backend, theory)]
    for k in range(samples):
        m = _random_process(rng, n, backend)
        f = linear_map(m, dims, dims, backend)
        processes.append(f if theory == CLM else double(f).with_theory(theory))
    if theory == MCLM:
        # genuine sums of doubled processes
        processes += [sum_maps([processes[k], processes[k + 1]])
                      for k in range(1, min(samples, 20))]

    if backend == EXACT:
        grid = tuple(GaussianRational(Fraction(k, N_SCALARS - 1)) for k in range(N_SCALARS))
    else:
        grid = tuple(complex(k / (N_SCALARS - 1)) for k in range(N_SCALARS))
    zero = zero_map((), pdims, backend, theory)
    return ProbeSet(dims, theory, backend, seed, tuple(states), tuple(labels), n_family,
                    tuple(extra), tuple(processes), grid, zero)
