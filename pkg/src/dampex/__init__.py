"""dampex: desk-scale verification of diffusion-type spectral expansions
for a wave equation carrying both frictional and viscoelastic damping."""

from .errors import (ConfigError, DampexError, DegenerateDataError,
                     InsufficientOrderError, QuadratureError,
                     SingularEvaluationError)
from .expansion import (ExpansionPolynomial, HeatKernelTerm, PropertyReport,
                        Term, build_expansion, check_property_A,
                        check_property_B, check_property_C, combine,
                        heat_partial_sum, inverse_transform_terms)
from .experiments import (HeatComparisonReport, RateFit, SandwichReport,
                          TimeGrid, VanishingReport, default_config,
                          expected_decay_slope, fit_decay_rate,
                          heat_comparison, property_suite, run_report,
                          sample_ball, sandwich_check, vanishing_limit_check)
from .initial_data import (Box, Gaussian, GaussianMonomial, InitialDatum,
                           MomentTable, Shifted, SumDatum, absolute_moment,
                           add_data, datum_from_config, gauss_kernel,
                           moment_table, pair_from_config,
                           quadrature_raw_moment, weighted_l1_norm, zero_datum)
from .norms import (FrequencyRegion, LowerBoundConstants, RegionNorm,
                    gaussian_monomial_integral, heat_increment_norm,
                    increment_lower_constant, increment_lower_constant_1d,
                    lower_bound_constants, poly_gaussian_l2_norm,
                    radial_factor_1d, region_l2_norm, residual_norm,
                    symbol_gap_sup_ratio, taylor_remainder_sup_ratio)
from .spectral import (REPRESENTATIONS, LowFrequencySymbol, SpectralSolution,
                       evaluate_heat, stable_heat_difference)

__version__ = "0.1.0"
