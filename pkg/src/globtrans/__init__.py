"""Synchronous rule-based rewriting of finite presheaves (graphs and friends)."""
from .colimit import Span, colimit_of_diagram, generalized_pushout, mediating
from .engine import (Instance, batch_step, iterate, online_step, run_online, thinness_violations,
                     transport)
from .matching import extend_mono, find_monos, is_isomorphic
from .presheaf import (BaseCategory, Cocone, Diagram, Generator, Presheaf, PresheafMorphism,
                       StructureError, compose, disjoint_union, identity, is_mono,
                       representable, validate_morphism, validate_presheaf)
from .rules import (InvalidRuleSystem, Rule, RuleInclusion, RuleSystem, check_incremental,
                    close_under_composition, validate_rule_system)

__all__ = [
    "BaseCategory", "Cocone", "Diagram", "Generator", "Instance", "InvalidRuleSystem",
    "Presheaf", "PresheafMorphism", "Rule", "RuleInclusion", "RuleSystem", "Span",
    "StructureError", "batch_step", "check_incremental", "close_under_composition",
    "colimit_of_diagram", "compose", "disjoint_union", "extend_mono", "find_monos",
    "generalized_pushout", "identity", "is_isomorphic", "is_mono", "iterate", "mediating",
    "online_step", "representable", "run_online", "thinness_violations", "transport",
    "validate_morphism", "validate_presheaf", "validate_rule_system",
]
