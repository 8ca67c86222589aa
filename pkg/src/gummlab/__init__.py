"""Finite universal-algebra workbench: congruences, relations, diagrams and Galois checks."""

from .algebra import (
    EMPTY_SIGNATURE,
    GROUP_SIGNATURE,
    LATTICE_SIGNATURE,
    Congruence,
    FiniteAlgebra,
    Homomorphism,
    Signature,
    all_homomorphisms,
    homomorphisms,
    identity,
    image_factorization,
    is_homomorphism,
    kernel_pair,
    product,
    quotient,
    subalgebra_generated,
    surjections,
)
from .builders import builtin, corpus
from .congruence import (
    all_congruences,
    bourn_check,
    congruence_generated,
    gumm_check,
    is_modular,
    principal_congruence,
    shifting_lemma_holds,
)
from .diagram import (
    Cube,
    Rectangle,
    Square,
    cube_check,
    is_pullback,
    is_pushout,
    is_right_saturated,
    pullback,
    pushout_rectangle_check,
    split_rectangle_check,
)
from .errors import GenerationExhausted, GummError, HypothesisViolated, InputError, NotApplicable
from .galois import (
    abelianize,
    admissibility_check,
    birkhoff_pushout_check,
    central_normal_scan,
    classify,
    is_central_extension,
    is_normal_extension,
    is_trivial_extension,
    naturality_square,
    split_central_check,
)
from .partition import Partition
from .relcalc import BinRel

__all__ = [
    "BinRel",
    "Congruence",
    "Cube",
    "EMPTY_SIGNATURE",
    "FiniteAlgebra",
    "GROUP_SIGNATURE",
    "GenerationExhausted",
    "GummError",
    "Homomorphism",
    "HypothesisViolated",
    "InputError",
    "LATTICE_SIGNATURE",
    "NotApplicable",
    "Partition",
    "Rectangle",
    "Signature",
    "Square",
    "abelianize",
    "admissibility_check",
    "all_congruences",
    "all_homomorphisms",
    "birkhoff_pushout_check",
    "bourn_check",
    "builtin",
    "central_normal_scan",
    "classify",
    "congruence_generated",
    "corpus",
    "cube_check",
    "gumm_check",
    "homomorphisms",
    "identity",
    "image_factorization",
    "is_central_extension",
    "is_homomorphism",
    "is_modular",
    "is_normal_extension",
    "is_pullback",
    "is_pushout",
    "is_right_saturated",
    "is_trivial_extension",
    "kernel_pair",
    "naturality_square",
    "principal_congruence",
    "product",
    "pullback",
    "pushout_rectangle_check",
    "quotient",
    "shifting_lemma_holds",
    "split_central_check",
    "split_rectangle_check",
    "subalgebra_generated",
    "surjections",
]

__version__ = "0.1.0"
