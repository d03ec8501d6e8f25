"""Candidate test structures and the checks they are held to.

A test structure ``♯`` sends each state to an effect on the same wire type
(its test) and, through transformability, each process ``f: A -> B`` to a
process ``f♯: B -> A``.  A :class:`SharpCandidate` is that second map; the
action on states and scalars is its restriction.

The five axioms:

composability     (ψ⊗φ)♯ = ψ♯ ⊗ φ♯
transformability  (f∘ψ)♯ = ψ♯ ∘ f♯
probabilities     ψ♯∘ψ = 1 = φ♯∘φ  implies  ψ♯∘φ in [0, 1]
testability       χ ≠ 0  implies  r♯ r χ♯∘χ = 1 for some scalar r
sharpness         for normalised ψ, φ:  ψ♯∘φ = 1  iff  φ = ψ

Testability is read with ``♯(r) = r`` already in force, so it amounts to
``s = χ♯∘χ`` being real and strictly positive, with ``r² = 1/s``.  No square
root is ever taken.

Each check runs on a :class:`~sharplab.probes.ProbeSet` and returns a
:class:`~sharplab.reports.VerificationReport`; a failure never raises.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import TypeMismatch
from .probes import ProbeSet
from .reports import VerificationReport
from .scalars import (DEFAULT_TOL, EXACT, FLOAT, GaussianRational, close, exact,
                      is_positive, is_probability, is_real, real_part)
from .tensor import (DCLM, LinearMap, adjoint, approx_equal, basis_state,
                     compose_par, compose_seq, scalar, scale, transpose, zero_map)
from .tensor import state as mkstate
from .theories import (check_proper_mixture, discard_effect, double, lift, mix,
                       positive_effect, support_projector)

AXIOMS = ("composability", "transformability", "probabilities", "testability", "sharpness")
LEMMAS = ("certainty", "scalar_identity", "state_involution", "effect_involution",
          "process_involution", "dagger_seq", "dagger_par", "constraint_C1", "constraint_C2")

CONSTRAINT_TUPLES = 100

ANCHORS = {
    "composability": "Axiom composability: (ψ⊗φ)♯ = ψ♯⊗φ♯",
    "transformability": "Axiom transformability: (f∘ψ)♯ = ψ♯∘f♯",
    "probabilities": "Axiom probabilities: ψ♯∘ψ = 1 = φ♯∘φ ⟹ ψ♯∘φ ∈ [0,1]",
    "testability": "Axiom testability: χ≠0 ⟹ ∃r, r♯ r χ♯∘χ = 1",
    "sharpness": "Axiom sharpness: ψ♯∘φ = 1 ⟺ φ = ψ",
    "certainty": "Lemma: ♯(1)=1",
    "scalar_identity": "Lemma: ♯(r)=r",
    "state_involution": "Lemma: ψ♯♯=ψ for normalised ψ",
    "effect_involution": "Lemma: ψ♯♯♯=ψ♯ for normalised ψ",
    "process_involution": "Theorem: ♯ is involutive, f♯♯=f",
    "dagger_seq": "Theorem: ♯ is a dagger, (g∘f)♯ = f♯∘g♯",
    "dagger_par": "Theorem: ♯ is a dagger, (f⊗g)♯ = f♯⊗g♯",
    "constraint_C1": "Constraint C1: (ψ♯∘f♯)⊗(φ♯∘g♯) = (ψ♯⊗φ♯)∘(f⊗g)♯",
    "constraint_C2": "Constraint C2: ψ♯∘f♯∘g♯ = ψ♯∘(g∘f)♯",
    "inner_product": "Inner product ⟨ψ,φ⟩ := ψ♯∘φ; ⟨χ,χ⟩=0 ⟺ χ=0",
    "transpose_counterexample": "Transpose: 𝔇(ψ+iφ)ᵀ∘𝔇(ψ+iφ) = 1+0+0+i² = 0",
    "mixture_untestability": "Mixtures: e∘Σpᵢψᵢ = 1 ⟹ e∘ψᵢ = 1 for all i",
}


@dataclass(frozen=True)
class SharpCandidate:
    """A candidate ``♯``: a map on processes reversing their type."""

    name: str
    process_sharp: Callable[[LinearMap], LinearMap]

    def __call__(self, f):
        out = self.process_sharp(f)
        if (out.dom, out.cod) != (f.cod, f.dom):
            raise TypeMismatch(f.cod + f.dom, out.dom + out.cod, f"{self.name} must reverse types")
        return out

    def state_sharp(self, psi):
        """The test ``ψ♯`` for a state: an effect on the state's type."""
        if not psi.is_state:
            raise ValueError("state_sharp expects a state")
        return self(psi)

    def scalar_sharp(self, r, backend=None):
        backend = backend or (EXACT if not isinstance(r, (float, complex)) else FLOAT)
        return self(scalar(r, backend)).scalar()


def hermitian_candidate():
    """``♯`` = conjugate transpose (applied to the doubled matrix)."""
    return SharpCandidate("hermitian", adjoint)


def transpose_candidate():
    """``♯`` = plain transpose (applied to the doubled matrix)."""
    return SharpCandidate("transpose", transpose)


CANDIDATES = {"hermitian": hermitian_candidate, "transpose": transpose_candidate}


def _eq(f, g, tol):
    return approx_equal(f, g, tol)


def _value(effect, state):
    return compose_seq(effect, state).scalar()


def _report(c, check, kind, probes, failures, details=None):
    witness = failures[0] if failures else None
    return VerificationReport(c.name, check, kind, ANCHORS[check], probes,
                              not failures, witness, details or {})


def _normalised_for(c, s, tol):
    """Candidate-relative normalisation: ``s♯∘s == 1``."""
    return close(_value(c.state_sharp(s), s), 1, tol)


# -- axioms -----------------------------------------------------------------

def _composability(c, probes, tol):
    fails, n = [], 0
    for i, j in probes.cycled(range(len(probes.states)), range(len(probes.states))):
        psi, phi = probes.states[i], probes.states[j]
        lhs = c.state_sharp(compose_par(psi, phi))
        rhs = compose_par(c.state_sharp(psi), c.state_sharp(phi))
        n += 1
        if not _eq(lhs, rhs, tol):
            fails.append({"psi": psi, "phi": phi, "lhs": lhs, "rhs": rhs})
    return n, fails, {}


def _transformability(c, probes, tol):
    fails, n = [], 0
    states = probes.states + probes.extra_states
    for f, psi in probes.cycled(probes.processes, states):
        lhs = c.state_sharp(compose_seq(f, psi))
        rhs = compose_seq(c.state_sharp(psi), c(f))
        n += 1
        if not _eq(lhs, rhs, tol):
            fails.append({"f": f, "psi": psi, "lhs": lhs, "rhs": rhs})
    return n, fails, {}


def _probabilities(c, probes, tol):
    fails, n = [], 0
    normed = [_normalised_for(c, s, tol) for s in probes.states]
    for i, j in probes.state_pairs():
        if not (normed[i] and normed[j]):
            continue
        v = _value(c.state_sharp(probes.states[i]), probes.states[j])
        n += 1
        if not is_probability(v, tol):
            fails.append({"psi": probes.states[i], "phi": probes.states[j], "value": v})
    return n, fails, {"normalised_states": sum(normed)}


def scale_for_test(c, chi, tol=DEFAULT_TOL):
    """``(s, r²)`` for ``s = χ♯∘χ`` and ``r² = 1/s``, or ``(s, None)`` when
    ``s`` is not strictly positive and no ``r`` exists."""
    s = _value(c.state_sharp(chi), chi)
    if not is_positive(s, tol):
        return s, None
    return s, (1 / s if isinstance(s, GaussianRational) else 1 / real_part(s))


def _testability(c, probes, tol):
    fails, n = [], 0
    smallest = None
    for chi in probes.states + probes.extra_states:
        if chi.is_zero(0.0 if chi.backend == FLOAT else tol):
            continue
        s, r2 = scale_for_test(c, chi, tol)
        n += 1
        if r2 is None:
            fails.append({"chi": chi, "value": s})
        elif smallest is None or real_part(s) < real_part(smallest[0]):
            smallest = (s, r2)
    details = {}
    if smallest is not None:
        details = {"min_s": smallest[0], "r_squared_at_min_s": smallest[1]}
    return n, fails, details


def _sharpness(c, probes, tol):
    fails, n, ones = [], 0, 0
    normed = [_normalised_for(c, s, tol) for s in probes.states]
    for i, j in probes.state_pairs():
        if not (normed[i] and normed[j]):
            continue
        psi, phi = probes.states[i], probes.states[j]
        v = _value(c.state_sharp(psi), phi)
        is_one = close(v, 1, tol)
        same = _eq(psi, phi, tol)
        n += 1
        ones += is_one
        if is_one != same:
            fails.append({"psi": psi, "phi": phi, "value": v, "states_equal": same})
    return n, fails, {"unit_branch": ones}


_AXIOM_CHECKS = {
    "composability": _composability,
    "transformability": _transformability,
    "probabilities": _probabilities,
    "testability": _testability,
    "sharpness": _sharpness,
}


def check_axiom(c, axiom, probes, tol=DEFAULT_TOL):
    """Check one of the five test-structure axioms on ``probes``."""
    if axiom not in _AXIOM_CHECKS:
        raise ValueError(f"unknown axiom {axiom!r}; expected one of {AXIOMS}")
    n, fails, details = _AXIOM_CHECKS[axiom](c, probes, tol)
    return _report(c, axiom, "axiom", n, fails, details)


# -- lemmas and theorems ------------------------------------------------------

def _certainty(c, probes, tol):
    one = exact(1) if probes.backend == EXACT else 1.0
    v = c.scalar_sharp(one, probes.backend)
    fails = [] if close(v, one, tol) else [{"r": one, "lhs": v, "rhs": one}]
    return 1, fails, {"sharp_of_one": v}


def _scalar_identity(c, probes, tol):
    fails = []
    for r in probes.scalars:
        v = c.scalar_sharp(r, probes.backend)
        vv = c.scalar_sharp(v, probes.backend)
        if not (close(v, r, tol) and close(vv, r, tol) and is_probability(v, tol)):
            fails.append({"r": r, "lhs": v, "rhs": r, "sharp_sharp": vv})
    return len(probes.scalars), fails, {}


def _state_involution(c, probes, tol):
    fails = []
    for psi in probes.states:
        back = c(c.state_sharp(psi))
        if not _eq(back, psi, tol):
            fails.append({"psi": psi, "lhs": back, "rhs": psi})
    return len(probes.states), fails, {}


def _effect_involution(c, probes, tol):
    fails = []
    for psi in probes.states:
        t = c.state_sharp(psi)
        back = c(c(t))
        if not _eq(back, t, tol):
            fails.append({"psi": psi, "lhs": back, "rhs": t})
    return len(probes.states), fails, {}


def _process_involution(c, probes, tol):
    fails = []
    for f in probes.processes:
        back = c(c(f))
        if not _eq(back, f, tol):
            fails.append({"f": f, "lhs": back, "rhs": f})
    return len(probes.processes), fails, {}


def _dagger_seq(c, probes, tol):
    fails = []
    pairs = probes.cycled(probes.processes, probes.processes)
    for g, f in pairs:
        lhs = c(compose_seq(g, f))
        rhs = compose_seq(c(f), c(g))
        if not _eq(lhs, rhs, tol):
            fails.append({"f": f, "g": g, "lhs": lhs, "rhs": rhs})
    return len(pairs), fails, {}


def _dagger_par(c, probes, tol):
    fails = []
    pairs = probes.cycled(probes.processes, probes.processes)
    for f, g in pairs:
        lhs = c(compose_par(f, g))
        rhs = compose_par(c(f), c(g))
        if not _eq(lhs, rhs, tol):
            fails.append({"f": f, "g": g, "lhs": lhs, "rhs": rhs})
    return len(pairs), fails, {}


def _constraint_count(probes):
    # every family state, then CONSTRAINT_TUPLES random tuples
    return min(len(probes.states), probes.n_family + CONSTRAINT_TUPLES)


def _constraint_c1(c, probes, tol):
    # (f∘ψ)⊗(g∘φ) tested two ways: per factor, and as one composite
    fails = []
    tuples = probes.cycled(probes.states, probes.states, probes.processes, probes.processes,
                           count=_constraint_count(probes))
    for psi, phi, f, g in tuples:
        lhs = compose_par(compose_seq(c.state_sharp(psi), c(f)),
                          compose_seq(c.state_sharp(phi), c(g)))
        rhs = compose_seq(compose_par(c.state_sharp(psi), c.state_sharp(phi)),
                          c(compose_par(f, g)))
        if not _eq(lhs, rhs, tol):
            fails.append({"psi": psi, "phi": phi, "f": f, "g": g, "lhs": lhs, "rhs": rhs})
    return len(tuples), fails, {}


def _constraint_c2(c, probes, tol):
    # g∘f∘ψ tested two ways: one process at a time, and the composite at once
    fails = []
    tuples = probes.cycled(probes.states, probes.processes, probes.processes,
                           count=_constraint_count(probes))
    for psi, f, g in tuples:
        lhs = compose_seq(compose_seq(c.state_sharp(psi), c(f)), c(g))
        rhs = compose_seq(c.state_sharp(psi), c(compose_seq(g, f)))
        if not _eq(lhs, rhs, tol):
            fails.append({"psi": psi, "f": f, "g": g, "lhs": lhs, "rhs": rhs})
    return len(tuples), fails, {}


_LEMMA_CHECKS = {
    "certainty": _certainty,
    "scalar_identity": _scalar_identity,
    "state_involution": _state_involution,
    "effect_involution": _effect_involution,
    "process_involution": _process_involution,
    "dagger_seq": _dagger_seq,
    "dagger_par": _dagger_par,
    "constraint_C1": _constraint_c1,
    "constraint_C2": _constraint_c2,
}


def verify_lemma(c, lemma, probes, tol=DEFAULT_TOL):
    """Check one derived property (lemma, involution, dagger law, C1/C2)."""
    if lemma not in _LEMMA_CHECKS:
        raise ValueError(f"unknown lemma {lemma!r}; expected one of {LEMMAS}")
    n, fails, details = _LEMMA_CHECKS[lemma](c, probes, tol)
    return _report(c, lemma, "lemma", n, fails, details)


# -- the transpose counterexample ----------------------------------------------

def transpose_counterexample(candidate=None, backend=EXACT):
    """Run the ``ψ + iφ`` construction against ``candidate`` (default: transpose).

    With ``ψ = e0`` and ``φ = e1`` the doubled self-tests are 1 and the cross
    test is 0, yet ``χ = ψ + iφ`` has ``𝔇(χ)ᵀ∘𝔇(χ) = 0``: a nonzero state
    with no test.  ``amplitude_terms`` is the four-term expansion of
    ``χ♯∘χ`` before doubling (``1 + 0 + 0 + i²`` for the transpose); the
    doubled scalar is its squared modulus.  The report fails exactly when a
    counterexample has been exhibited.
    """
    c = candidate or transpose_candidate()
    i = GaussianRational(0, 1) if backend == EXACT else 1j
    psi, phi = basis_state(0, 2, backend), basis_state(1, 2, backend)
    iphi = scale(i, phi)
    chi = psi + iphi
    dpsi, dphi, dchi = double(psi), double(phi), double(chi)
    self_psi = _value(c.state_sharp(dpsi), dpsi)
    self_phi = _value(c.state_sharp(dphi), dphi)
    cross = _value(c.state_sharp(dpsi), dphi)
    chi_value = _value(c.state_sharp(dchi), dchi)
    terms = [_value(c.state_sharp(a), b) for a in (psi, iphi) for b in (psi, iphi)]
    amplitude = sum(terms[1:], terms[0])
    hypotheses = close(self_psi, 1) and close(self_phi, 1) and close(cross, 0)
    found = hypotheses and not is_positive(chi_value)
    details = {"self_test_psi": self_psi, "self_test_phi": self_phi, "cross_test": cross,
               "chi_test": chi_value, "amplitude_terms": terms, "amplitude": amplitude}
    witness = {"psi": dpsi, "phi": dphi, "chi": dchi, "value": chi_value} if found else None
    return VerificationReport(c.name, "transpose_counterexample", "counterexample",
                              ANCHORS["transpose_counterexample"], 1, not found, witness, details)


# -- inner product ----------------------------------------------------------------

def inner_product(c, psi, phi):
    """``⟨ψ, φ⟩ := ψ♯ ∘ φ`` in the doubled theory (raw states are doubled first)."""
    psi, phi = lift(psi), lift(phi)
    if psi.cod != phi.cod:
        raise TypeMismatch(psi.cod, phi.cod, "inner_product")
    return _value(c.state_sharp(psi), phi)


def verify_inner_product(c, probes, tol=DEFAULT_TOL):
    """Symmetry, linearity (nonnegative combinations), positivity and
    definiteness of ``⟨ψ, φ⟩ = ψ♯∘φ`` on probes."""
    states = probes.states
    rng = np.random.default_rng(probes.seed)
    fails = {"symmetry": [], "linearity": [], "positivity": [], "definiteness": []}
    pairs = probes.state_pairs()
    for i, j in pairs:
        a = inner_product(c, states[i], states[j])
        b = inner_product(c, states[j], states[i])
        if not close(a, b, tol):
            fails["symmetry"].append({"psi": states[i], "phi": states[j], "lhs": a, "rhs": b})
    triples = probes.cycled(states, states, states)
    for k, (psi, p1, p2) in enumerate(triples):
        if probes.backend == EXACT:
            x, y = exact(Fraction(k % 5, 3)), exact(Fraction(k % 7 + 1, 4))
        else:
            x, y = rng.uniform(0, 3, size=2)
        combo = scale(x, p1) + scale(y, p2)
        lhs = inner_product(c, psi, combo)
        rhs = x * inner_product(c, psi, p1) + y * inner_product(c, psi, p2)
        if not close(lhs, rhs, tol):
            fails["linearity"].append({"psi": psi, "phi1": p1, "phi2": p2, "a": x, "b": y,
                                       "lhs": lhs, "rhs": rhs})
    scaled = []
    for k, psi in enumerate(states):
        r = exact(Fraction(k % 4, 2)) if probes.backend == EXACT else float(rng.uniform(0, 2))
        scaled.append((r, scale(r, psi)))
    for chi in states + probes.extra_states + (probes.zero,):
        v = inner_product(c, chi, chi)
        zero = chi.is_zero(0.0 if chi.backend == FLOAT else tol)
        if not (is_real(v, tol) and real_part(v) >= -tol):
            fails["positivity"].append({"chi": chi, "value": v})
        if close(v, 0, tol) != zero:
            fails["definiteness"].append({"chi": chi, "value": v, "chi_is_zero": zero})
    for (r, chi), psi in zip(scaled, states):
        v = inner_product(c, chi, chi)
        expect = r * r * inner_product(c, psi, psi)
        if not close(v, expect, tol):
            fails["positivity"].append({"chi": chi, "r": r, "value": v, "expected": expect})
    n = len(pairs) + len(triples) + len(states) * 2 + len(probes.extra_states) + 1
    flat = [dict(w, property=name) for name, ws in fails.items() for w in ws]
    details = {name: not ws for name, ws in fails.items()}
    return _report(c, "inner_product", "lemma", n, flat, details)


# -- mixtures have no test ----------------------------------------------------------

def _random_admissible(rng, dims, backend):
    """``E = sum_k λ_k P_k`` over the orthogonal projectors of a random
    basis, with ``λ_k`` in ``[0, 1]``; then ``0 <= E <= I``."""
    n = _dims_size(dims)
    raws = []
    for _ in range(n):
        if backend == EXACT:
            v = [GaussianRational(int(a), int(b)) for a, b in rng.integers(-2, 3, size=(n, 2))]
        else:
            v = list(rng.normal(size=n) + 1j * rng.normal(size=n))
        raws.append(mkstate(v, dims, backend))
    e_op = prev = zero_map(dims, dims, backend)
    for m in range(n):
        cur = support_projector(raws[:m + 1])
        lam = exact(Fraction(int(rng.integers(0, 9)), 8)) if backend == EXACT \
            else float(rng.uniform(0, 1))
        e_op = e_op + scale(lam, cur - prev)
        prev = cur
    return e_op


def _admissible_effects(states, rng, backend, count):
    """Effects ``ψ ↦ <ψ, E ψ>`` with ``0 <= E <= I``: the tests of the
    components, the projector onto their span, the discard effect, and
    ``count`` random ones."""
    dims = states[0].cod
    out = [(f"test of component {k}", positive_effect(support_projector([s])))
           for k, s in enumerate(states)]
    out.append(("support projector", positive_effect(support_projector(states))))
    out.append(("discard", discard_effect(dims, backend)))
    for k in range(count):
        out.append((f"random admissible {k}",
                    positive_effect(_random_admissible(rng, dims, backend))))
    return out


def _dims_size(dims):
    n = 1
    for d in dims:
        n *= d
    return n


def mixture_untestability(weights, states, tol=DEFAULT_TOL, samples=20, seed=0):
    """Show that a proper mixture ``ρ = sum_i p_i ψ_i`` has no test.

    ``states`` are raw (undoubled) states; their doubles are normalised
    before mixing.  For every admissible effect ``e`` (one of the form
    ``<ψ, E ψ>`` with ``0 <= E <= I``, i.e. one producing probabilities on
    every normalised state) ``e∘ρ = 1`` forces ``e∘ψ_i = 1`` for every
    component, since each term is at most 1 and the weights sum to 1.  Such
    an ``e`` then accepts several distinct states with certainty, against
    sharpness.  For the maximally mixed state the only such ``e`` is the
    discard effect.

    Raises :class:`~sharplab.errors.DegenerateMixture` for fewer than two
    distinct states.  The report fails when untestability has been shown.
    """
    check_proper_mixture(weights, states, tol)
    backend = FLOAT if any(s.backend == FLOAT for s in states) else EXACT
    doubled = [_normalised_double(s) for s in states]
    rho = mix(weights, doubled, tol)
    rng = np.random.default_rng(seed)
    rows, implication_ok, certain = [], True, []
    for label, e in _admissible_effects(states, rng, backend, samples):
        on_rho = _value(e, rho)
        on_parts = [_value(e, d) for d in doubled]
        if close(on_rho, 1, tol):
            certain.append(label)
            if not all(close(v, 1, tol) for v in on_parts):
                implication_ok = False
        rows.append({"effect": label, "on_mixture": on_rho, "on_components": on_parts,
                     "produces_probabilities": all(is_probability(v, tol) for v in on_parts)})
    demonstrated = bool(certain) and implication_ok
    dims = states[0].cod
    n = _dims_size(dims)
    flat = _flat_identity_state(dims, backend)
    maximally_mixed = approx_equal(rho, scale(exact(Fraction(1, n)) if backend == EXACT
                                              else 1 / n, flat), tol)
    details = {"certain_on_mixture": certain, "implication_holds": implication_ok,
               "sharpness_violated": demonstrated, "maximally_mixed": maximally_mixed,
               "effects": rows}
    if maximally_mixed:
        # tr(Eρ) = tr(E)/n = 1 with E <= I leaves only E = I
        details["unique_certain_effect"] = "discard"
    witness = None
    if demonstrated:
        row = next(r for r in rows if r["effect"] == certain[0])
        witness = {"mixture": rho, "weights": list(weights), "effect": certain[0],
                   "on_mixture": row["on_mixture"], "on_components": row["on_components"]}
    return VerificationReport("mixture", "mixture_untestability", "counterexample",
                              ANCHORS["mixture_untestability"], len(rows), not demonstrated,
                              witness, details)


def _normalised_double(s):
    d = double(s)
    n2 = _value(discard_effect(s.cod, s.backend), d)
    return scale(1 / n2, d)


def _flat_identity_state(dims, backend):
    """Doubled state with the entries of the identity operator: ``n`` times
    the maximally mixed state."""
    e = discard_effect(dims, backend)
    return LinearMap((), e.dom, e.matrix.reshape(-1, 1), DCLM)
