"""Conditional ball-correlation (COME) screening for metric-space responses."""
from .core import (ComeResult, ball_profile, joint_profile, point_statistics, r_squared,
                   tau_hat, w_statistic, w_statistic_bruteforce)
from .density import ConditioningSample, WeightVector, bandwidth, kernel_weights
from .errors import DistanceMatrixError, ValidationError
from .metrics import MetricKind, MetricSpec, pairwise_distances
from .screening import ScreeningReport, come_csis, iterative_come_csis, model_size

__version__ = "0.1.0"
