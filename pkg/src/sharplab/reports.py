"""Verification reports and their JSON/text renderings."""

from dataclasses import dataclass, field
import json

import numpy as np

from .scalars import format_scalar

PASS, FAIL = "PASS", "FAIL"


def render(value):
    """JSON-friendly rendering of scalars, maps and containers."""
    from .tensor import LinearMap

    if isinstance(value, LinearMap):
        return {"dom": list(value.dom), "cod": list(value.cod), "theory": value.theory,
                "matrix": [[format_scalar(x) for x in row] for row in value.matrix]}
    if isinstance(value, dict):
        return {str(k): render(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    if isinstance(value, (bool, str, int)) or value is None:
        return value
    if isinstance(value, np.ndarray):
        return render(value.tolist())
    return format_scalar(value)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking one axiom, lemma or counterexample on probes.

    ``kind`` is ``"axiom"``, ``"lemma"`` or ``"counterexample"``.  A failing
    report always carries a ``witness``: the inputs and both sides of the
    violated equation.
    """

    subject: str
    check: str
    kind: str
    anchor: str
    probes: int
    passed: bool
    witness: dict = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError(f"{self.subject}/{self.check}: failing report without witness")

    @property
    def verdict(self):
        return PASS if self.passed else FAIL

    def __bool__(self):
        return self.passed

    def to_dict(self):
        out = {"subject": self.subject, "check": self.check, "kind": self.kind,
               "paper_anchor": self.anchor, "verdict": self.verdict, "probes": self.probes}
        if self.details:
            out["details"] = render(self.details)
        if self.witness is not None:
            out["witness"] = render(self.witness)
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)

    def __str__(self):
        line = f"{self.subject}/{self.check}: {self.verdict} ({self.probes} probes)"
        if self.witness is not None:
            line += f" witness={json.dumps(render(self.witness), ensure_ascii=False)}"
        return line
