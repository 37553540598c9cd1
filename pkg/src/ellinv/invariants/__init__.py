"""Invariant section spaces: Reynolds, bootstrapping and closed forms."""
from .additive import AdditiveQuotient, additive_quotient_invariants
from .engine import (Action, FunctionSpace, InvariantSpace, PolySpace,
                     RationalEndo, SampleBudget, SymTensorSpace, batched_rank,
                     bootstrap_invariants, curve_action, evaluate_basis,
                     quasi_isogeny_sample, reynolds_invariants, sample_rng,
                     span_failure_bound, span_failure_frequency)
from .families import (FAMILIES, ClosedForm, FamilyModel, Rank1Case,
                       exact_dim, family_model, imprimitive_closed_form,
                       imprimitive_invariants, rank1_case, rank1_invariants)
from .lattices import (LinearQuotient, an_invariance_check, an_pushforward_dims,
                       g2_degree3, g2_isogeny, linear_invariants)
from .st12 import ST12Kummer, st12_kummer
