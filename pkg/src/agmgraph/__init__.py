"""AGM graphs over odd finite fields.

Build the directed graph of the arithmetic-geometric-mean map on pairs over
F_q, classify its components (isolated points, fish, jellyfish, turtles,
acyclic), relate them to Legendre-form elliptic curves through the explicit
2-isogeny, and verify the class-number and multiplicity identities that
govern the component counts.
"""

from .aquarium import (Aquarium, BuildBudgetError, Vertex, agm_children,
                       agm_parents, build, lift, scalar_act, vertex_count,
                       vertices)
from .classgroup import (ImagQuadOrder, QuadForm, class_number, compose_reduce,
                         h2_order, hurwitz, kronecker_2, kronecker_sum,
                         principal_form, reduced_forms, trace_congruence_46)
from .fields import (FieldCtx, FieldElement, FieldError, embed, field_new,
                     parse_field_spec)
from .legendre import (BudgetError, LegendreCurve, agm_isogeny, curve_for,
                       j_invariant, lambda_fiber, lambda_of,
                       supersingular_lambdas, trace_table)
from .taxonomy import (Census, Component, ComponentType, StructuralViolation,
                       census, classify_component, component_ids, heads_of,
                       orbit_multiplicity, strong_components, weak_components)
from .verify import (FAIL, FLAGGED, INCONCLUSIVE, PASS, VerificationReport,
                     check_bounds, check_fate, check_identity,
                     check_isogeny_edges, check_M_s, check_multiplicity,
                     check_N_s, check_taxonomy, exit_code_for, run_checks)

__version__ = "0.1.0"
