"""mixbound: block schedules, dependence-adapted norms, partition complexity
and Monte Carlo validation of concentration bounds for mixing processes."""

from .grid import (BlockSchedule, DivisorChain, SampleLattice, block_schedule,
                   divisor_chain, first_block_length, lattice_members,
                   nearest_divisor, sample_lattice)
from .mixing import (MixingEstimate, MixingProfile, estimate_alpha, estimate_tau,
                     exponential_profile, iid_profile, m_dependent_profile,
                     monotone_envelope, parse_profile, polynomial_profile,
                     tabulated_profile)
from .norms import (BlockMoment, QuantileCurve, active_lag_count, block_moment,
                    dependence_norm, holder_factor)
from .rates import (RateReport, UniversalConstants, closed_form_envelopes,
                    effective_sample_size, maximal_bound, rate_factor,
                    rate_report, rate_table, regime_classify, strong_approx_rate,
                    universal_constants)
from .chaining import (FunctionClass, NormFamily, PartitionSequence,
                       cell_diameter, chain_decomposition, complexity_exact,
                       complexity_greedy, covering_number, entropy_integral,
                       exact_covering_number, l2_family, lr_family,
                       schedule_family, sequence_value)
from .processes import (PathBundle, ProcessModel, ar1_model, empirical_process,
                        iid_model, lazy_renewal_model, ma_model, mc_expected_sup,
                        parse_model, simulate)
from .function_classes import ClassMember, ProcessClass, catalog_names, make_class
from .coupling import (BernsteinReport, GapReport, GaussianCouple, ReplicaPath,
                       bernstein_check, block_independence_test, build_replica,
                       coupling_gap, coupling_gap_sweep, gaussian_couple,
                       coupled_tail_decay_check, strong_approx_experiment)
from .report import ExperimentReport, dumps_canonical

__version__ = "0.1.0"
