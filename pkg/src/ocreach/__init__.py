"""Reachability of semilinear target sets in binary-weighted one-counter
automata under integer, natural, and VASS step semantics."""

from .automaton import (Configuration, OracleResult, Semantics, Transition,
                        ValidationError, WeightedAutomaton, automaton,
                        brute_force_decide, effect_set, path_amplitude,
                        replay, step_successors, validate_automaton)
from .intervals import (OMEGA, ConcreteIntervalSet, canonical_decomposition,
                        density_at, density_infimum, density_plus_at,
                        interval_set, ratio_matrix)
from .targets import (AffineForm, Branch, LinearIntervalSystem,
                      NotExpressibleError, Slot, augment_with_negatives,
                      branch, instantiate, linear_system, load_target,
                      residue_split_set, target_from_json, target_to_json,
                      unwrap_modulo_automaton)
from .classify import (Classification, classify, detect_omega_constellation,
                       harbor_chains, isolation_witness, ratio_boundedness,
                       vass_gap_witness)
from .coverfun import (CoverFunction, Simple, cf_add, cf_compose, cf_leq,
                       cover_function, cover_iterate, cover_table,
                       exact_cover_matrix, reach_vass_decide, sigma,
                       simple_of_amplitude, vass_cover)
from .laurent import (BuildingBlockInstance, IntervalPolynomial,
                      SizeGuardExceeded, building_block, check_rho_chain,
                      make_growing, normalize, poly, poly_add, poly_mul,
                      reach_building_block, reach_integer, reach_natural)
from .acyclic import acyclicize, cycle_gadget, length_bound
from .hardness import (SubsetSumInstance, gadget_automaton, hard_pair,
                       reduce_to_gadget, subset_sum, subset_sum_solve)

__version__ = "0.1.0"
