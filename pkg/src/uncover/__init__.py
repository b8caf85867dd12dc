"""Random vertex uncovering on graphs: exact simulation, martingale checks
and Monte Carlo comparison against Gaussian limit covariances."""
from .engine import Realization, StepPath, TimeAssignment, evaluate, run, sample_uncover_times
from .ensemble import (EnsembleStats, ExperimentSpec, brute_force_oracle, compare, gaussianity_screen,
                       run_ensemble)
from .errors import UncoverError
from .generators import ModelSpec, generate, gw_degree_sequence
from .graph import (DegreeStats, Graph, LimitParams, Regime, TriangleCensus, degree_stats, hom_count,
                    limit_params, read_edgelist, triangle_census, write_edgelist)
from .martingales import (MartingalePaths, decomposition_residual, expected_qv, martingale_paths,
                          quadratic_covariation, triangle_decomposition)
from .models import CovarianceModel, covariance, derandomize, gaussian_sample, randomize

__version__ = "0.1.0"
