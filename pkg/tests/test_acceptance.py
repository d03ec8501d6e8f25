"""Acceptance criteria 1-10, one test each.

Each criterion prints a ``CRITERION n: PASS|FAIL`` line (shown in the pytest
terminal summary, or directly when this file is run as a script).
"""

from fractions import Fraction
import subprocess
import sys
import time

import numpy as np
import pytest

from sharplab.probes import make_probes
from sharplab.scalars import EXACT, FLOAT, GaussianRational
from sharplab.sharp import (AXIOMS, check_axiom, hermitian_candidate, mixture_untestability,
                            transpose_candidate, transpose_counterexample, verify_inner_product,
                            verify_lemma)
from sharplab.suite import CHECKS, SuiteConfig, born_crosscheck, run_check, tomography_agreement
from sharplab.tensor import basis_state, linear_map, state
from sharplab.theories import double, equal_up_to_global_phase, is_pure, mix, pure_representative

RESULTS = []
H, T = hermitian_candidate(), transpose_candidate()


def record(n, ok, detail):
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_1_transpose_counterexample():
    t0 = time.perf_counter()
    rep = transpose_counterexample(backend=EXACT)
    dt = time.perf_counter() - t0
    d = rep.details
    ok = (d["self_test_psi"] == 1 and d["self_test_phi"] == 1 and d["cross_test"] == 0
          and d["chi_test"] == 0 and isinstance(d["chi_test"], GaussianRational)
          and d["amplitude_terms"] == [1, 0, 0, -1] and not rep.passed and dt < 1.0)
    record(1, ok, f"self tests {d['self_test_psi']}, {d['self_test_phi']}; cross "
                  f"{d['cross_test']}; chi {d['chi_test']} (exact); {dt:.3f}s")


def test_criterion_2_hermitian_axioms():
    t0 = time.perf_counter()
    failures, probes = [], 0
    for backend in (EXACT, FLOAT):
        for dim in (2, 3, 4):
            p = make_probes((dim,), samples=200, seed=0, backend=backend)
            assert p.n_family == dim * dim and len(p.states) == dim * dim + 200
            for axiom in AXIOMS:
                rep = check_axiom(H, axiom, p, tol=1e-9)
                probes += rep.probes
                if not rep.passed:
                    failures.append(f"{backend}/{dim}/{axiom}")
    dt = time.perf_counter() - t0
    record(2, not failures and dt < 30, f"{probes} probe evaluations, failures {failures}, "
                                       f"{dt:.1f}s")


def test_criterion_3_lemmas_exact():
    out = []
    for dim in (2, 3):
        p = make_probes((dim,), samples=200, seed=0, backend=EXACT)
        assert len(p.scalars) == 50
        assert all(0 <= s.real <= 1 for s in p.scalars)
        for lemma in ("certainty", "state_involution", "effect_involution", "scalar_identity"):
            out.append(verify_lemma(H, lemma, p).passed)
    record(3, all(out), f"{sum(out)}/{len(out)} lemma checks exact")


def test_criterion_4_dagger_laws():
    out = []
    for c in (H, T):
        for dim in (2, 3):
            p = make_probes((dim,), samples=200, seed=0, backend=FLOAT)
            for law in ("dagger_seq", "dagger_par"):
                rep = verify_lemma(c, law, p, tol=1e-9)
                out.append(rep.passed and rep.probes >= 200)
    testable = check_axiom(H, "testability", make_probes((2,), samples=20)).passed
    untestable = not check_axiom(T, "testability", make_probes((2,), samples=20)).passed
    record(4, all(out) and testable and untestable,
           f"{sum(out)}/{len(out)} dagger-law runs; testability separates the candidates")


def test_criterion_5_constraints():
    out = []
    for c in (H, T):
        for dim in (2, 3):
            p = make_probes((dim,), samples=200, seed=0, backend=FLOAT)
            for eq in ("constraint_C1", "constraint_C2"):
                rep = verify_lemma(c, eq, p, tol=1e-9)
                out.append(rep.passed and rep.probes >= 100 + p.n_family)
    record(5, all(out), f"{sum(out)}/{len(out)} constraint runs")


def test_criterion_6_inner_product_and_born():
    out = []
    for dim in (2, 3, 4):
        for backend in (EXACT, FLOAT):
            p = make_probes((dim,), samples=200, seed=0, backend=backend)
            rep = verify_inner_product(H, p)
            out.append(rep.passed and all(rep.details.values()))
    born = all(born_crosscheck(dim, 1000, seed=0, tol=1e-12).passed for dim in (2, 3, 4))
    record(6, all(out) and born, f"{sum(out)}/{len(out)} inner-product runs; Born rule "
                                 f"{'agrees' if born else 'disagrees'} on 3x1000 pairs")


def test_criterion_7_local_tomography():
    runs = {}
    for dims in ((2,), (2, 2)):
        for ancilla in (False, True):
            o = tomography_agreement(dims, 100, seed=0, backend=FLOAT, ancilla=ancilla)
            runs[(dims, ancilla)] = (o.passed, o.probes)
    ok = all(p and n == 100 for p, n in runs.values())
    record(7, ok, "100/100 agreement at [2] and [2,2], with and without the ancilla"
           if ok else str(runs))


def test_criterion_8_mixture_untestability():
    half = Fraction(1, 2)
    e0, e1 = basis_state(0, 2), basis_state(1, 2)
    rep = mixture_untestability([half, half], [e0, e1])
    rows = {r["effect"]: r for r in rep.details["effects"]}
    a = rows["test of component 0"]["on_mixture"] == half
    b = rows["discard"]["on_mixture"] == 1 and rows["discard"]["on_components"] == [1, 1]
    flagged = rep.details["sharpness_violated"] and not rep.passed
    suite = run_check(CHECKS["mixture/untestability"], SuiteConfig(dims=(2,)))
    record(8, a and b and flagged and suite.matches,
           f"(e0)♯∘ρ = {rows['test of component 0']['on_mixture']}, discard∘ρ = "
           f"{rows['discard']['on_mixture']}, suite: {suite.text()}")


def test_criterion_9_purity():
    rng = np.random.default_rng(0)
    wrong = 0
    for _ in range(100):
        f = linear_map(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)), (2,), (2,), FLOAT)
        m = double(f)
        if not (is_pure(m) and equal_up_to_global_phase(pure_representative(m), f, 1e-7)):
            wrong += 1
        g = linear_map((rng.integers(-3, 4, (2, 2)) + 1j * rng.integers(-3, 4, (2, 2))).tolist(),
                       (2,), (2,), EXACT)
        wrong += not is_pure(double(g))
    for _ in range(20):
        a, b = (rng.normal(size=2) + 1j * rng.normal(size=2) for _ in range(2))
        p = rng.uniform(0.05, 0.95)
        rho = mix([p, 1 - p], [state(a / np.linalg.norm(a), backend=FLOAT),
                               state(b / np.linalg.norm(b), backend=FLOAT)])
        wrong += is_pure(rho)
    record(9, wrong == 0, f"{wrong} misclassifications over 100 pure (float and exact) "
                          "and 20 mixed")


def test_criterion_10_determinism():
    cmd = [sys.executable, "-m", "sharplab", "verify", "--all", "--format", "json"]
    runs = [subprocess.run(cmd, capture_output=True, check=False) for _ in range(2)]
    ok = all(r.returncode == 0 for r in runs) and runs[0].stdout == runs[1].stdout \
        and len(runs[0].stdout) > 0
    record(10, ok, f"two runs, {len(runs[0].stdout)} bytes each, identical: "
                   f"{runs[0].stdout == runs[1].stdout}")


if __name__ == "__main__":
    fns = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for fn in sorted(fns, key=lambda f: int(f.__name__.split("_")[2])):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
