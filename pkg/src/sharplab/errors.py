"""Exception types shared across the package."""


class TypeMismatch(TypeError):
    """Two wire types that must agree do not.

    Carries both offending space types so callers can report them.
    """

    def __init__(self, expected, got, context=""):
        self.expected = tuple(expected)
        self.got = tuple(got)
        msg = f"type mismatch: expected {list(self.expected)}, got {list(self.got)}"
        if context:
            msg = f"{context}: {msg}"
        super().__init__(msg)


class WeightsNotConvex(ValueError):
    """Mixture weights are negative or do not sum to one."""


class DegenerateMixture(ValueError):
    """A mixture has fewer than two distinct pure components."""


class UnboundBox(KeyError):
    """A diagram box has neither an inline matrix nor a binding."""


class InvalidDiagram(ValueError):
    """Evaluation was attempted on a diagram that fails validation."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))
