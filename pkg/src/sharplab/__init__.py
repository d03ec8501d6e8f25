"""Exact and numerical checks of test structures on complex linear maps."""

from .diagram import Box, Diagram, compose, eval_diagram, validate
from .errors import (DegenerateMixture, InvalidDiagram, TypeMismatch, UnboundBox,
                     WeightsNotConvex)
from .probes import ProbeSet, make_probes
from .reports import VerificationReport
from .scalars import EXACT, FLOAT, GaussianRational, exact, format_scalar, parse_scalar
from .sharp import (SharpCandidate, check_axiom, hermitian_candidate, inner_product,
                    mixture_untestability, transpose_candidate, transpose_counterexample,
                    verify_inner_product, verify_lemma)
from .tensor import (CLM, DCLM, MCLM, LinearMap, adjoint, approx_equal, compose_par,
                     compose_seq, conjugate, effect, identity, linear_map, scalar, state,
                     transpose)
from .theories import (born_probability, double, equal_up_to_global_phase, is_pure, mix,
                       pure_representative, sum_maps)
from .tomography import equal_by_tomography, probe_family

__version__ = "0.1.0"
