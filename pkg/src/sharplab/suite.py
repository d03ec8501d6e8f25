"""The registry of checks, their expected verdicts, and the suite runner.

Each check id is ``subject/name``.  A check runs once per configured
dimension and its verdict is the conjunction.  The suite succeeds when every
verdict equals the expected one.
"""

from dataclasses import dataclass, replace
from functools import lru_cache
import json
import os

import numpy as np

from . import sharp
from .probes import make_probes
from .reports import FAIL, PASS, render
from .scalars import DEFAULT_TOL, EXACT, FLOAT, close, exact
from .tensor import DCLM, approx_equal, basis_state, linear_map, scale, state
from .theories import (born_probability, double, equal_up_to_global_phase, is_pure, mix,
                       pure_representative)
from .tomography import equal_by_tomography, probe_family

SEED_ENV = "SHARPLAB_SEED"
TOMOGRAPHY_PAIRS = 100
BORN_PAIRS = 1000
BORN_TOL = 1e-12
PURE_SAMPLES, MIXED_SAMPLES = 100, 20


class ConfigError(ValueError):
    pass


def default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class SuiteConfig:
    """``backend=None`` lets each check use its own default: exact for the
    theorem checks, float for the random sweeps."""

    dims: tuple = (2, 3)
    seed: int = 0
    samples: int = 200
    tolerance: float = DEFAULT_TOL
    backend: str = None
    format: str = "text"

    def __post_init__(self):
        if not self.dims:
            raise ConfigError("at least one dimension is required")
        for d in self.dims:
            if not isinstance(d, (int, np.integer)) or d < 1:
                raise ConfigError("dimension must be ≥ 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.samples < 1:
            raise ConfigError("samples must be ≥ 1")
        if not self.tolerance >= 0:
            raise ConfigError("tolerance must be ≥ 0")
        if self.backend not in (None, EXACT, FLOAT):
            raise ConfigError(f"backend must be exact or float, not {self.backend!r}")
        if self.format not in ("text", "json"):
            raise ConfigError(f"format must be text or json, not {self.format!r}")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))


@dataclass(frozen=True)
class Outcome:
    """What one check produced on one dimension."""

    passed: bool
    probes: int
    witness: dict = None


@dataclass(frozen=True)
class Check:
    check_id: str
    anchor: str
    expected: str
    run: object            # (config, dim, backend) -> Outcome
    default_backend: str = EXACT
    per_dim: bool = True

    def expected_for(self, dims):
        """The expected-FAIL rows need a wire with room for ``e0 + i e1``
        (or for two distinct states); on dimension 1 alone they pass."""
        if self.expected == FAIL and self.per_dim and max(dims) < 2:
            return PASS
        return self.expected


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    anchor: str
    verdict: str
    expected: str
    probes: int
    witness: dict = None

    @property
    def matches(self):
        return self.verdict == self.expected

    def to_dict(self):
        out = {"check_id": self.check_id, "paper_anchor": self.anchor,
               "verdict": self.verdict, "expected": self.expected, "probes": self.probes}
        if self.witness is not None:
            out["witness"] = render(self.witness)
        return out

    def text(self):
        if self.matches:
            tail = " (expected)" if self.verdict == FAIL else ""
            return f"{self.check_id}: {self.verdict}{tail}"
        return f"{self.check_id}: {self.verdict} (MISMATCH: expected {self.expected})"


@lru_cache(maxsize=32)
def _probes(dim, samples, seed, backend):
    return make_probes((dim,), samples=samples, seed=seed, backend=backend, theory=DCLM)


def _from_report(report):
    return Outcome(report.passed, report.probes, report.witness)


def _axiom(cand, axiom):
    def run(cfg, dim, backend):
        p = _probes(dim, cfg.samples, cfg.seed, backend)
        return _from_report(sharp.check_axiom(sharp.CANDIDATES[cand](), axiom, p, cfg.tolerance))
    return run


def _lemma(cand, lemma):
    def run(cfg, dim, backend):
        p = _probes(dim, cfg.samples, cfg.seed, backend)
        return _from_report(sharp.verify_lemma(sharp.CANDIDATES[cand](), lemma, p, cfg.tolerance))
    return run


def _inner(cand):
    def run(cfg, dim, backend):
        p = _probes(dim, cfg.samples, cfg.seed, backend)
        return _from_report(sharp.verify_inner_product(sharp.CANDIDATES[cand](), p, cfg.tolerance))
    return run


def _counterexample(cand):
    def run(cfg, dim, backend):
        return _from_report(sharp.transpose_counterexample(sharp.CANDIDATES[cand](), backend))
    return run


def _mixture(cfg, dim, backend):
    # the maximally mixed state on one wire of dimension ``dim``
    if dim < 2:
        return Outcome(True, 0)
    w = exact(1) / dim if backend == EXACT else 1.0 / dim
    states = [basis_state(k, dim, backend) for k in range(dim)]
    report = sharp.mixture_untestability([w] * dim, states, cfg.tolerance, seed=cfg.seed)
    return _from_report(report)


def _random_raw(rng, dom, cod, backend):
    n, m = int(np.prod(cod)), int(np.prod(dom))
    if backend == EXACT:
        re = rng.integers(-2, 3, size=(n, m))
        im = rng.integers(-2, 3, size=(n, m))
        return linear_map((re + 1j * im).tolist(), dom, cod, EXACT)
    return linear_map(rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m)), dom, cod, FLOAT)


def _phase(rng, backend):
    if backend == EXACT:
        # unit Gaussian rationals, including the non-axis phase (3 + 4i)/5
        phases = [(1, 0), (0, 1), (-1, 0), (0, -1), ("3/5", "4/5")]
        return exact(phases[int(rng.integers(0, len(phases)))])
    return complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))


def tomography_agreement(dims, pairs, seed, backend=FLOAT, ancilla=False, tol=DEFAULT_TOL):
    """Compare ``equal_by_tomography`` with matrix equality on random pairs of
    doubled maps; half of the pairs are equal up to a global phase."""
    rng = np.random.default_rng(seed)
    fam = probe_family(tuple(dims), "local", backend)
    n = 0
    for k in range(pairs):
        f = _random_raw(rng, dims, dims, backend)
        g = scale(_phase(rng, backend), f) if k % 2 == 0 else _random_raw(rng, dims, dims, backend)
        df, dg = double(f), double(g)
        verdict = bool(equal_by_tomography(df, dg, fam, tol, ancilla=ancilla))
        truth = approx_equal(df, dg, tol)
        n += 1
        if verdict != truth:
            return Outcome(False, n, {"f": f, "g": g, "tomography": verdict, "matrix": truth})
    return Outcome(True, n)


def _tomography(ancilla):
    def run(cfg, dim, backend):
        out = tomography_agreement((dim,), TOMOGRAPHY_PAIRS, cfg.seed, backend, ancilla,
                                   cfg.tolerance)
        if out.passed and dim == 2:
            extra = tomography_agreement((2, 2), TOMOGRAPHY_PAIRS, cfg.seed, backend, ancilla,
                                         cfg.tolerance)
            return Outcome(extra.passed, out.probes + extra.probes, extra.witness)
        return out
    return run


def _random_normalised(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def born_crosscheck(dim, pairs, seed, tol=BORN_TOL):
    """``born_probability`` against ``|<φ, ψ>|²`` computed directly."""
    rng = np.random.default_rng(seed)
    for k in range(pairs):
        a, b = _random_normalised(rng, dim), _random_normalised(rng, dim)
        got = born_probability(state(a, backend=FLOAT), state(b, backend=FLOAT))
        want = abs(np.vdot(a, b)) ** 2
        if not close(got, want, tol):
            return Outcome(False, k + 1, {"phi": list(a), "psi": list(b), "lhs": got,
                                          "rhs": want})
    return Outcome(True, pairs)


def _born(cfg, dim, backend):
    return born_crosscheck(dim, BORN_PAIRS, cfg.seed)


def purity_classification(dim, seed, backend=FLOAT, pure=PURE_SAMPLES, mixed=MIXED_SAMPLES):
    """``is_pure`` on random doubled maps (with representative recovery) and
    on random proper mixtures of two states."""
    rng = np.random.default_rng(seed)
    n = 0
    for _ in range(pure):
        f = _random_raw(rng, (dim,), (dim,), backend)
        m = double(f)
        n += 1
        if not is_pure(m):
            return Outcome(False, n, {"map": m, "expected": "pure", "got": "mixed"})
        probe = m if backend == FLOAT else m.to_float()
        rep = pure_representative(probe)
        if not equal_up_to_global_phase(rep, f.to_float(), 1e-7):
            return Outcome(False, n, {"map": m, "representative": rep})
    if dim < 2:
        return Outcome(True, n)
    for _ in range(mixed):
        a = _random_normalised(rng, dim)
        b = _random_normalised(rng, dim)
        p = float(rng.uniform(0.1, 0.9))
        rho = mix([p, 1 - p], [state(a, backend=FLOAT), state(b, backend=FLOAT)])
        n += 1
        if is_pure(rho):
            return Outcome(False, n, {"map": rho, "expected": "mixed", "got": "pure"})
    return Outcome(True, n)


def _purity(cfg, dim, backend):
    return purity_classification(dim, cfg.seed, backend)


def _registry():
    checks = []
    expected_fail = {("transpose", "testability"), ("transpose", "inner_product"),
                     ("transpose", "counterexample")}
    float_sweeps = {"dagger_seq", "dagger_par", "constraint_C1", "constraint_C2"}
    for cand in ("hermitian", "transpose"):
        def exp(name):
            return FAIL if (cand, name) in expected_fail else PASS
        for a in sharp.AXIOMS:
            checks.append(Check(f"{cand}/{a}", sharp.ANCHORS[a], exp(a), _axiom(cand, a)))
        for lem in sharp.LEMMAS:
            checks.append(Check(f"{cand}/{lem}", sharp.ANCHORS[lem], exp(lem), _lemma(cand, lem),
                                FLOAT if lem in float_sweeps else EXACT))
        checks.append(Check(f"{cand}/inner_product", sharp.ANCHORS["inner_product"],
                            exp("inner_product"), _inner(cand)))
        checks.append(Check(f"{cand}/counterexample", sharp.ANCHORS["transpose_counterexample"],
                            exp("counterexample"), _counterexample(cand), per_dim=False))
    checks += [
        Check("mixture/untestability", sharp.ANCHORS["mixture_untestability"], FAIL, _mixture),
        Check("tomography/local", "Local tomography: equal statistics ⟺ equal doubled maps",
              PASS, _tomography(False), FLOAT),
        Check("tomography/ancilla", "Tomography with a dimension-2 context wire",
              PASS, _tomography(True), FLOAT),
        Check("born/crosscheck", "Born rule: 𝔇(φ)†∘𝔇(ψ) = |⟨φ,ψ⟩|²", PASS, _born, FLOAT),
        Check("purity/classification", "Purity: m = 𝔇(f) ⟺ reshuffled rank 1",
              PASS, _purity, FLOAT),
    ]
    return {c.check_id: c for c in sorted(checks, key=lambda c: c.check_id)}


CHECKS = _registry()


def select(ids=None):
    """Checks by id (all when ``ids`` is empty).  Unknown ids raise
    :class:`ConfigError`."""
    if not ids:
        return list(CHECKS.values())
    unknown = [i for i in ids if i not in CHECKS]
    if unknown:
        raise ConfigError(f"unknown check id(s): {', '.join(unknown)}")
    return [CHECKS[i] for i in sorted(set(ids))]


def run_check(check, config):
    backend = config.backend or check.default_backend
    dims = config.dims if check.per_dim else (2,)
    probes, witness, passed = 0, None, True
    for d in dims:
        out = check.run(config, d, backend)
        probes += out.probes
        if not out.passed and passed:
            passed = False
            witness = dict(out.witness or {}, dim=d)
    return CheckResult(check.check_id, check.anchor, PASS if passed else FAIL,
                       check.expected_for(dims), probes, witness)


def run_suite(config, ids=None):
    """Run the selected checks.  Returns ``(exit_code, results)`` with
    results sorted by check id; exit code 0 iff every verdict is expected."""
    results = [run_check(c, config) for c in select(ids)]
    return (0 if all(r.matches for r in results) else 1), results


def report_json(results):
    return json.dumps([r.to_dict() for r in results], sort_keys=True, ensure_ascii=False,
                      indent=2)


def report_text(results):
    lines = [r.text() for r in results]
    bad = sum(not r.matches for r in results)
    lines.append(f"{len(results) - bad}/{len(results)} checks match the expected verdicts")
    return "\n".join(lines)


def with_overrides(config, **kw):
    return replace(config, **{k: v for k, v in kw.items() if v is not None})
