"""Group divisible designs over GF(2^m).

The point set is the field minus {0, 1}; groups are the pairs {a, a+1};
blocks are k-subsets summing to 1 with no nonempty proper subset
summing to 1.  The package constructs these designs, evaluates their
exact parameters, and verifies the design properties by exhaustive or
sampled re-counting.
"""

__version__ = "0.1.0"

from .closed_forms import (DesignParams, b_closed, consistency_identities,
                           design_params, is_conjectured, lambda_closed,
                           r_closed, tau_closed)
from .construction import (Block, OmegaTauDecomposition, PairContext, block_set,
                           blocks_through_pair, collect_wk, enumerate_wk,
                           group_set, is_valid_block, pair_context,
                           partition_omega_tau, sample_pair_contexts)
from .field import FieldContext, build_field, is_irreducible, least_irreducible
from .kernels import BACKEND
from .reporting import Check, VerificationReport
from .verifier import (DesignTriple, PairCountMatrix, conjecture_probe,
                       design_triple, verify_balance, verify_cardinalities,
                       verify_gdd, verify_lemma_relations)

__all__ = [
    "BACKEND",
    "Block",
    "Check",
    "DesignParams",
    "DesignTriple",
    "FieldContext",
    "OmegaTauDecomposition",
    "PairContext",
    "PairCountMatrix",
    "VerificationReport",
    "__version__",
    "b_closed",
    "block_set",
    "blocks_through_pair",
    "build_field",
    "collect_wk",
    "conjecture_probe",
    "consistency_identities",
    "design_params",
    "design_triple",
    "enumerate_wk",
    "group_set",
    "is_conjectured",
    "is_irreducible",
    "is_valid_block",
    "lambda_closed",
    "least_irreducible",
    "pair_context",
    "partition_omega_tau",
    "r_closed",
    "sample_pair_contexts",
    "tau_closed",
    "verify_balance",
    "verify_cardinalities",
    "verify_gdd",
    "verify_lemma_relations",
]
