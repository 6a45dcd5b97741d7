"""flaglab: a Monte Carlo laboratory for random flag complexes.

Builds clique complexes of random graphs, collapses them down to their
cross-polytope homology generators, measures Betti numbers and torsion,
and runs seeded, reproducible experiments around the collapse and
homology thresholds.
"""

__version__ = "0.1.0"

from .complexes import (Graph, SimplicialComplex, build_graph, clique_complex,
                        component_closure, default_dim_cap, dual_graph,
                        flag_closure, link, strongly_connected_components)
from .collapse import (ALMOST_COLLAPSED, BUDGET_EXHAUSTED, COLLAPSED_BELOW_D,
                       NO, STUCK, YES, CollapseOutcome, CollapseStep,
                       CrossPolytopeHit, almost_d_collapse,
                       census_crosspolytope_decomposition,
                       check_pi1_preconditions, collapse_around_vertex,
                       detect_crosspolytopes, essentially_2sphere_free,
                       greedy_d_collapse, is_d_collapsible_exact, replay_steps)
from .density import (CBoundedReport, DensityReport, brute_force_density,
                      c_bounded_check, density_bound_audit, essential_density,
                      is_strictly_balanced)
from .homology import (BoundaryMatrix, HomologyReport, MorseInequalityReport,
                       SmithNormalForm, betti_numbers, boundary_matrix,
                       euler_characteristic, homology_report,
                       homology_with_torsion, morse_inequality_check,
                       smith_normal_form)
from .models import (ReferenceConstants, RngSpec, crosspolytope_automorphisms,
                     crosspolytope_graph, erdos_renyi_cycle_probability,
                     reference_constants, sample_flag_complex, sample_gnp,
                     sample_linial_meshulam)
from .experiments import (ExperimentConfig, ExperimentResult, GofReport,
                          InvariantViolation, ScanResult, TorsionReport,
                          TrialRecord, counts_to_histogram, disjoint_union,
                          poisson_gof, run_experiment, run_trial,
                          threshold_scan, torsion_search, write_result)
