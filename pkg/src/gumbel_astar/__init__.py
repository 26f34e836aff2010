"""Exact sampling by A* search over a lazily realized Gumbel process."""

from .astar import (BoundStore, ExactSample, SearchAborted, SearchStats, astar_sample,
                    astar_sample_multi_lb, drill_down_sample, global_bound_sample,
                    multi_sample_reuse)
from .bounds import (GaussianTerm, QuadraticBound, TargetDecomposition, cauchy_regression_bound,
                     cauchy_term_bound, sum_bound_constant, sum_bound_linear, sum_bound_quadratic)
from .construction import HeapNode, TopDownStream, in_order_stream, top_down_stream
from .expr import interval_eval, parse
from .gumbel import (EULER_GAMMA, gumbel_max_trick, log_partition_estimate, sample_gumbel,
                     sample_trunc_gumbel)
from .intervals import Interval
from .models import (PRESETS, ModelPreset, cauchy_regression_preset, clutter_target,
                     gaussian_mean_target, make_preset, peakiness_target, regression_preset)
from .proposals import Exponential1D, IsotropicGaussian, UniformBox, log_mass, sample_restricted
from .regions import Region, contains, split_at
from .rejection import PieceTable, osstar_sample, rejection_sample, slice_sample

__version__ = "0.1.0"
