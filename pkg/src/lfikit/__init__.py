"""Finite-matrix toolkit for logics of formal inconsistency (LFIs).

Formulas and schemas (:mod:`lfikit.formula`), matrix semantics and clones
(:mod:`lfikit.matrices`), the matrix catalog (:mod:`lfikit.registry`),
Hilbert systems and proofs (:mod:`lfikit.hilbert`), the three-valued 8K
family (:mod:`lfikit.eightk`), congruence checks (:mod:`lfikit.algebra`)
and translations (:mod:`lfikit.translate`).
"""

from .formula import parse, render, instantiate, match_schema, ParseError
from .matrices import (
    MatrixLogic, truth_table, evaluate, is_valid, entails, find_countermodel,
    rule_sound, clone_functions, bounded_terms, classify_explosion,
)
from .registry import builtin, builtin_keys, lookup, load_matrix, save_matrix
from .hilbert import (
    get_system, get_rule, check_proof, deduction_transform, soundness_report,
    metarule_sound_bounded, proof_from_json, proof_to_json,
)
from .eightk import Family, build_logic, code_of, census, separating_formula
from .algebra import enumerate_congruences, congruence_connective_check, blok_pigozzi_check
from .translate import apply_translation, conservativity_check, define_hyperclassical

__version__ = "0.1.0"

__all__ = [
    "parse", "render", "instantiate", "match_schema", "ParseError",
    "MatrixLogic", "truth_table", "evaluate", "is_valid", "entails", "find_countermodel",
    "rule_sound", "clone_functions", "bounded_terms", "classify_explosion",
    "builtin", "builtin_keys", "lookup", "load_matrix", "save_matrix",
    "get_system", "get_rule", "check_proof", "deduction_transform", "soundness_report",
    "metarule_sound_bounded", "proof_from_json", "proof_to_json",
    "Family", "build_logic", "code_of", "census", "separating_formula",
    "enumerate_congruences", "congruence_connective_check", "blok_pigozzi_check",
    "apply_translation", "conservativity_check", "define_hyperclassical",
]
