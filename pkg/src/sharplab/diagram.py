"""Diagrams as data: typed boxes, wires between ports, explicit dangling ports.

A wire is ``(src_box, src_port, tgt_box, tgt_port)`` and runs from an output
port of ``src_box`` to an input port of ``tgt_box``.  ``inputs`` and
``outputs`` list the dangling ports, as ``(box, port)``, in the order they
appear in the evaluated map's domain and codomain.  Every port is either
wired or listed exactly once.

Evaluation contracts box tensors pairwise in topological order.
"""

from dataclasses import dataclass
from math import prod
import json

import numpy as np

from .errors import InvalidDiagram, TypeMismatch, UnboundBox
from .scalars import EXACT, FLOAT, exact, parse_scalar
from .tensor import CLM, THEORIES, LinearMap, identity, join_theory, space_type
from .theories import double, doubled_dims

ROLES = ("state", "effect", "scalar", "process")


@dataclass(frozen=True)
class Box:
    """A process box.  ``label`` is the key looked up in bindings
    (defaults to ``name``); ``matrix`` is an optional built-in payload."""

    name: str
    role: str
    dims_in: tuple
    dims_out: tuple
    matrix: LinearMap = None
    label: str = None

    def __post_init__(self):
        object.__setattr__(self, "dims_in", tuple(int(d) for d in self.dims_in))
        object.__setattr__(self, "dims_out", tuple(int(d) for d in self.dims_out))
        if self.label is None:
            object.__setattr__(self, "label", self.name)


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    where: tuple = ()

    def __str__(self):
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple = ()

    @property
    def ok(self):
        return not self.violations

    def kinds(self):
        return [v.kind for v in self.violations]

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class Diagram:
    boxes: tuple = ()
    wires: tuple = ()
    inputs: tuple = ()
    outputs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        object.__setattr__(self, "wires", tuple(tuple(w) for w in self.wires))
        object.__setattr__(self, "inputs", tuple(tuple(p) for p in self.inputs))
        object.__setattr__(self, "outputs", tuple(tuple(p) for p in self.outputs))

    def box(self, name):
        for b in self.boxes:
            if b.name == name:
                return b
        raise KeyError(name)

    @property
    def dom(self):
        return tuple(self.box(b).dims_in[p] for b, p in self.inputs)

    @property
    def cod(self):
        return tuple(self.box(b).dims_out[p] for b, p in self.outputs)


def _role_ok(role, dims_in, dims_out):
    if role == "state":
        return not dims_in
    if role == "effect":
        return not dims_out
    if role == "scalar":
        return not dims_in and not dims_out
    return role == "process"


def _topological(names, edges):
    """Kahn's algorithm, ties broken by declaration order.  Returns the
    order and the set of names left on a cycle."""
    indeg = {n: 0 for n in names}
    succ = {n: [] for n in names}
    for a, b in edges:
        succ[a].append(b)
        indeg[b] += 1
    order, ready = [], [n for n in names if indeg[n] == 0]
    while ready:
        n = ready.pop(0)
        order.append(n)
        for m in succ[n]:
            indeg[m] -= 1
            if indeg[m] == 0:
                ready.append(m)
        ready.sort(key=names.index)
    return order, [n for n in names if n not in order]


def validate(d):
    """All structural violations of ``d``; never raises."""
    out = []
    boxes = {}
    for b in d.boxes:
        if b.name in boxes:
            out.append(Violation("DuplicateBox", f"box name {b.name!r} used twice", (b.name,)))
        boxes[b.name] = b
        if b.role not in ROLES:
            out.append(Violation("BadRole", f"box {b.name!r} has unknown role {b.role!r}", (b.name,)))
        elif not _role_ok(b.role, b.dims_in, b.dims_out):
            out.append(Violation("RoleMismatch", f"{b.role} box {b.name!r} has ports "
                                 f"{list(b.dims_in)} -> {list(b.dims_out)}", (b.name,)))
        if any(x < 1 for x in b.dims_in + b.dims_out):
            out.append(Violation("BadDimension", f"box {b.name!r} has a dimension < 1", (b.name,)))
        if b.matrix is not None and (b.matrix.dom, b.matrix.cod) != (b.dims_in, b.dims_out):
            out.append(Violation("PayloadShape", f"box {b.name!r} declares {list(b.dims_in)} -> "
                                 f"{list(b.dims_out)} but its matrix is {list(b.matrix.dom)} -> "
                                 f"{list(b.matrix.cod)}", (b.name,)))

    used_out, used_in = {}, {}

    def port(kind, name, p, owner):
        b = boxes.get(name)
        if b is None:
            out.append(Violation("UnknownBox", f"{owner} refers to unknown box {name!r}", (name,)))
            return None
        dims = b.dims_out if kind == "out" else b.dims_in
        if not isinstance(p, int) or not 0 <= p < len(dims):
            out.append(Violation("BadPort", f"{owner}: box {name!r} has no {kind}put port {p!r}",
                                 (name,)))
            return None
        used = used_out if kind == "out" else used_in
        if (name, p) in used:
            out.append(Violation("PortReuse", f"{kind}put port {p} of box {name!r} is used by "
                                 f"{used[(name, p)]} and {owner}", (name,)))
        else:
            used[(name, p)] = owner
        return dims[p]

    edges = []
    for w in d.wires:
        if len(w) != 4:
            out.append(Violation("BadWire", f"wire {list(w)} is not a 4-tuple"))
            continue
        src, sp, tgt, tp = w
        owner = f"wire {src}:{sp}->{tgt}:{tp}"
        a = port("out", src, sp, owner)
        b = port("in", tgt, tp, owner)
        if a is not None and b is not None:
            if a != b:
                out.append(Violation("DimensionMismatch", f"{owner} joins dimension {a} "
                                     f"to dimension {b}", (src, tgt)))
            edges.append((src, tgt))
    for name, p in d.inputs:
        port("in", name, p, f"input {name}:{p}")
    for name, p in d.outputs:
        port("out", name, p, f"output {name}:{p}")
    for b in boxes.values():
        for p in range(len(b.dims_in)):
            if (b.name, p) not in used_in:
                out.append(Violation("UnconnectedPort", f"input port {p} of box {b.name!r} is "
                                     "neither wired nor listed in inputs", (b.name,)))
        for p in range(len(b.dims_out)):
            if (b.name, p) not in used_out:
                out.append(Violation("UnconnectedPort", f"output port {p} of box {b.name!r} is "
                                     "neither wired nor listed in outputs", (b.name,)))

    names = list(boxes)
    _, cyclic = _topological(names, edges)
    if cyclic:
        out.append(Violation("CycleDetected", f"boxes {cyclic} lie on a cycle", tuple(cyclic)))
    return ValidationResult(tuple(out))


def _payload(b, bindings):
    f = bindings.get(b.label, bindings.get(b.name)) if bindings else None
    if f is None:
        f = b.matrix
    if f is None:
        raise UnboundBox(b.label)
    if (f.dom, f.cod) != (b.dims_in, b.dims_out):
        raise TypeMismatch(b.dims_in + b.dims_out, f.dom + f.cod,
                           f"binding for box {b.name!r}")
    return f


def eval_diagram(d, bindings=None, backend=None):
    """Contract ``d`` to a single :class:`LinearMap`.

    ``bindings`` maps box labels (or names) to maps and overrides built-in
    payloads.  The empty diagram evaluates to the scalar 1.
    """
    result = validate(d)
    if not result.ok:
        raise InvalidDiagram(list(result.violations))
    payloads = {b.name: _payload(b, bindings or {}) for b in d.boxes}
    if backend is None:
        backend = FLOAT if any(f.backend == FLOAT for f in payloads.values()) else EXACT
    theory = CLM
    for f in payloads.values():
        theory = join_theory(theory, f.theory)

    names = [b.name for b in d.boxes]
    order, _ = _topological(names, [(w[0], w[2]) for w in d.wires])
    incoming = {}
    for src, sp, tgt, tp in d.wires:
        incoming.setdefault(tgt, []).append((("out", src, sp), tp))

    tensor = np.ones((), dtype=object if backend == EXACT else np.complex128)
    if backend == EXACT:
        tensor[()] = exact(1)
    labels = []
    for name in order:
        b = d.box(name)
        f = payloads[name]
        f = f.to_float() if backend == FLOAT else f.to_exact()
        t = f.matrix.reshape(b.dims_out + b.dims_in)
        blabels = [("out", name, p) for p in range(len(b.dims_out))] + \
                  [("in", name, p) for p in range(len(b.dims_in))]
        pairs = [(labels.index(src), len(b.dims_out) + tp) for src, tp in incoming.get(name, [])]
        axes_a = [a for a, _ in pairs]
        axes_b = [c for _, c in pairs]
        tensor = np.tensordot(tensor, t, axes=(axes_a, axes_b))
        labels = [l for k, l in enumerate(labels) if k not in axes_a] + \
                 [l for k, l in enumerate(blabels) if k not in axes_b]

    perm = [labels.index(("out", n, p)) for n, p in d.outputs] + \
           [labels.index(("in", n, p)) for n, p in d.inputs]
    tensor = np.transpose(tensor, perm) if perm else tensor
    m = np.asarray(tensor).reshape(prod(d.cod), prod(d.dom))
    return LinearMap(d.dom, d.cod, m, theory)


def _fresh(name, taken):
    while name in taken:
        name += "'"
    return name


def _renamed(d, taken):
    mapping = {}
    for b in d.boxes:
        mapping[b.name] = _fresh(b.name, taken | set(mapping.values()))
    boxes = tuple(Box(mapping[b.name], b.role, b.dims_in, b.dims_out, b.matrix, b.label)
                  for b in d.boxes)
    wires = tuple((mapping[s], sp, mapping[t], tp) for s, sp, t, tp in d.wires)
    return (boxes, wires, tuple((mapping[n], p) for n, p in d.inputs),
            tuple((mapping[n], p) for n, p in d.outputs))


def compose(mode, d1, d2):
    """Glue two diagrams.  ``seq`` runs ``d1`` first and feeds its outputs,
    in order, into the inputs of ``d2``; ``par`` places them side by side.
    Colliding box names in ``d2`` get primes appended (labels are kept, so
    bindings still apply)."""
    if mode not in ("seq", "par"):
        raise ValueError(f"mode must be 'seq' or 'par', not {mode!r}")
    boxes2, wires2, inputs2, outputs2 = _renamed(d2, {b.name for b in d1.boxes})
    if mode == "par":
        return Diagram(d1.boxes + boxes2, d1.wires + wires2,
                       d1.inputs + inputs2, d1.outputs + outputs2)
    if d1.cod != d2.dom:
        raise TypeMismatch(d2.dom, d1.cod, "compose(seq)")
    glue = tuple((s, sp, t, tp) for (s, sp), (t, tp) in zip(d1.outputs, inputs2))
    return Diagram(d1.boxes + boxes2, d1.wires + wires2 + glue, d1.inputs, outputs2)


def role_of(f):
    if f.is_scalar:
        return "scalar"
    if f.is_state:
        return "state"
    if f.is_effect:
        return "effect"
    return "process"


def box_diagram(name, f=None, dims_in=None, dims_out=None, role=None, label=None):
    """One box with all of its ports dangling, in port order."""
    if f is not None:
        dims_in, dims_out = f.dom, f.cod
    dims_in, dims_out = space_type(dims_in or ()), space_type(dims_out or ())
    if role is None:
        role = "scalar" if not dims_in and not dims_out else \
            "state" if not dims_in else "effect" if not dims_out else "process"
    b = Box(name, role, dims_in, dims_out, f, label)
    return Diagram((b,), (), tuple((name, p) for p in range(len(dims_in))),
                   tuple((name, p) for p in range(len(dims_out))))


def identity_diagram(dims, name="id"):
    """Parallel identity boxes, one per wire."""
    d = Diagram()
    for k, dim in enumerate(space_type(dims)):
        d = compose("par", d, box_diagram(f"{name}{k}", identity((dim,))))
    return d


def double_diagram(d):
    """The same wiring with every built-in payload doubled and every wire
    dimension squared."""
    boxes = tuple(Box(b.name, b.role, doubled_dims(b.dims_in), doubled_dims(b.dims_out),
                      None if b.matrix is None else double(b.matrix), b.label)
                  for b in d.boxes)
    return Diagram(boxes, d.wires, d.inputs, d.outputs)


def double_bindings(bindings):
    return {k: double(f) for k, f in (bindings or {}).items()}


# -- JSON ------------------------------------------------------------------------

def _parse_entry(x, backend):
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValueError(f"complex entry must be a [re, im] pair, got {x!r}")
        re, im = (_parse_entry(v, backend) for v in x)
        return re + im * (exact((0, 1)) if backend == EXACT else 1j)
    if isinstance(x, str):
        return parse_scalar(x, backend)
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValueError(f"cannot read matrix entry {x!r}")
    return exact(x) if backend == EXACT else complex(x)


def parse_matrix(entries, dims_in, dims_out, backend=EXACT, theory=CLM):
    """Matrix from JSON entries.

    Either a list of rows (each a list of ``prod(dims_in)`` entries) or a
    flat row-major list of all entries; a 1x1 map may also be a bare entry.
    Entries are numbers, ``"a/b"`` or ``"a/b + c/d i"`` strings, or
    ``[re, im]`` pairs.  The shape decides which reading applies, so a
    two-entry flat list is never taken for a pair.
    """
    rows, cols = prod(dims_out), prod(dims_in)
    if not isinstance(entries, (list, tuple)):
        if rows * cols != 1:
            raise ValueError(f"a bare entry only fits a 1x1 map, not {rows}x{cols}")
        flat = [entries]
    elif len(entries) == rows and all(isinstance(r, (list, tuple)) and len(r) == cols
                                      for r in entries):
        flat = [x for r in entries for x in r]
    elif len(entries) == rows * cols:
        flat = list(entries)
    else:
        raise ValueError(f"matrix entries do not fit a {rows}x{cols} map")
    arr = np.empty(rows * cols, dtype=object if backend == EXACT else np.complex128)
    arr[:] = [_parse_entry(x, backend) for x in flat]
    return LinearMap(tuple(dims_in), tuple(dims_out), arr.reshape(rows, cols), theory)


def diagram_from_dict(doc, backend=EXACT):
    """Read the JSON document form.  Returns ``(diagram, theory)``; the
    theory tag defaults to ``"CLM"``."""
    if not isinstance(doc, dict):
        raise ValueError("diagram document must be a JSON object")
    theory = doc.get("theory", CLM)
    if theory not in THEORIES:
        raise ValueError(f"unknown theory {theory!r}")
    boxes = []
    for spec in doc.get("boxes", []):
        dims_in = tuple(spec.get("dims_in", ()))
        dims_out = tuple(spec.get("dims_out", ()))
        m = spec.get("matrix")
        payload = None
        if m is not None:
            payload = parse_matrix(m, dims_in, dims_out, backend, spec.get("theory", theory))
        boxes.append(Box(spec["name"], spec.get("role", "process"), dims_in, dims_out,
                         payload, spec.get("label")))
    return Diagram(tuple(boxes), tuple(tuple(w) for w in doc.get("wires", [])),
                   tuple(tuple(p) for p in doc.get("inputs", [])),
                   tuple(tuple(p) for p in doc.get("outputs", []))), theory


def bindings_from_dict(doc, d, backend=EXACT):
    """Bindings document: box label -> matrix entries, shaped by that box."""
    out = {}
    by_label = {b.label: b for b in d.boxes}
    for key, entries in doc.items():
        b = by_label.get(key)
        if b is None:
            raise KeyError(f"binding {key!r} matches no box label")
        out[key] = parse_matrix(entries, b.dims_in, b.dims_out, backend)
    return out


def load_diagram(path, backend=EXACT):
    with open(path, encoding="utf-8") as fh:
        return diagram_from_dict(json.load(fh), backend)


def diagram_to_dict(d, theory=CLM):
    from .scalars import format_scalar

    boxes = []
    for b in d.boxes:
        spec = {"name": b.name, "role": b.role, "dims_in": list(b.dims_in),
                "dims_out": list(b.dims_out)}
        if b.label != b.name:
            spec["label"] = b.label
        if b.matrix is not None:
            spec["matrix"] = [[format_scalar(x) for x in row] for row in b.matrix.matrix]
        boxes.append(spec)
    return {"theory": theory, "boxes": boxes, "wires": [list(w) for w in d.wires],
            "inputs": [list(p) for p in d.inputs], "outputs": [list(p) for p in d.outputs]}


def dump_diagram(d, path, theory=CLM):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(diagram_to_dict(d, theory), fh, indent=2, ensure_ascii=False)
