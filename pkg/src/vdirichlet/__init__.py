"""Truncated vector-valued Dirichlet series: arithmetic, inversion, invertibility margins."""

__version__ = "0.1.0"

from .algebra import BC, C, H, Algebra, Coefficient, ScalarKind, matrices
from .errors import (
    DescriptorMismatch,
    DimensionTooLarge,
    DirichletError,
    ExplosionError,
    NeumannNotContractive,
    NotInvertible,
    NotInvertibleConstantTerm,
    ParseError,
    StructureViolation,
    UnsupportedIndexSet,
)
from .fileformat import dump_series, load_series, series_from_json, series_to_json
from .invert import InversionCertificate, invert, invert_generated, invert_neumann, invert_ordinary, verify_inverse
from .margin import MarginReport, halfplane_margin, polydisc_margin
from .semigroup import GeneratedSemigroup, IndexSet, OrdinaryIndexSet, enumerate_elements
from .series import DirichletSeries, HalfPlanePoint
from .weights import Weight, check_admissible, check_submultiplicative

__all__ = [name for name in dir() if not name.startswith("_")]
