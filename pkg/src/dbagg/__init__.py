"""Aggregation of finite relational database instances."""

from .aggregators import (AggregationError, AggregationOutcome, AverageVoter, DistanceBased,
                          Dictatorship, Intersection, Majority, MergeIncomplete, Oligarchy,
                          PermutedDictatorship, Quota, QuotaSpec, RelationwiseAverageVoter,
                          TrivialTop, TrivialZero, Union, aggregate, distance_candidates,
                          merge_relation, parse_rule)
from .constraints import (FunctionalDependency, ReferentialConstraint, ValueConstraint,
                          parse_constraint, parse_constraints, to_formula)
from .core import (NULL, Instance, Profile, Schema, SchemaError, active_domain, canonicalize,
                   permute, support, symmetric_distance)

__version__ = "0.1.0"

__all__ = [
    "AggregationError", "AggregationOutcome", "AverageVoter", "Dictatorship", "DistanceBased",
    "FunctionalDependency", "Instance", "Intersection", "Majority", "MergeIncomplete", "NULL",
    "Oligarchy", "PermutedDictatorship", "Profile", "Quota", "QuotaSpec",
    "ReferentialConstraint", "RelationwiseAverageVoter", "Schema", "SchemaError",
    "TrivialTop", "TrivialZero", "Union", "ValueConstraint", "active_domain", "aggregate",
    "canonicalize", "distance_candidates", "merge_relation", "parse_constraint",
    "parse_constraints", "parse_rule", "permute", "support", "symmetric_distance", "to_formula",
]
