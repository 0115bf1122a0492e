"""Exact verification of lambda-symmetries of ordinary differential equations.

Candidates (lambda-symmetries, telescopic fields, nonlocal symmetries on a
covering, invariants and reduced equations) are checked by exact symbolic
computation: every verdict is a zero test of a canonical rational normal form.
"""

from lamsym.checks import (
    CheckReport,
    check_covering_symmetry,
    check_determining,
    check_lambda_symmetry,
    check_lie_point,
    check_telescopic,
    verify_psi,
)
from lamsym.equiv import (
    ReducedEquation,
    a_equivalent,
    canonical_pair,
    check_invariants,
    invariant_chain,
    rewrite_reduction,
    verify_reduction,
)
from lamsym.errors import (
    DegenerateError,
    HypothesisError,
    JetOrderError,
    LamsymError,
    NonLatticeError,
    NormalizationError,
    ParseError,
    ProblemFileError,
    SubstitutionError,
    SymbolError,
)
from lamsym.expr import SymbolTable, parse, render
from lamsym.jet import Covering, JetField, OdeProblem, apply_A, restrict, total_derivative
from lamsym.problemfile import ProblemFile, load, loads
from lamsym.prolong import (
    LambdaPair,
    TelescopicField,
    bracket_defect,
    lambda_prolong,
    std_prolong,
    telescopic_prolong,
)
from lamsym.transforms import (
    ExponentialForm,
    InvariantPair,
    NonlocalSymmetry,
    exponential_pair,
    invariants_to_lambda,
    lambda_to_covering,
    nonlocal_to_lambda,
    rescale_pair,
    telescopic_to_lambda,
)

__version__ = "0.1.0"
