"""Secrecy-rate regions of the symmetric two-user Gaussian interference
channel with artificial noise."""
from .model import (ChannelParams, DomainError, NoSecrecyError, PowerConstraint,
                    RateGradient, RatePair, Strategy, perturbation_product,
                    rate_gradient, secrecy_rates, symmetric_rate)
from .optima import (MaxMinSolution, SingleUserSolution, compare_operating_modes,
                     critical_power, maxmin_point, p_of_lambda, single_user_point)
from .oracle import (GridSpec, OracleResult, oracle_max_sum, oracle_maxmin,
                     oracle_single_user)
from .region import RegionEstimate, hull_contains, sample_region, timeshare

__all__ = [
    "ChannelParams", "DomainError", "NoSecrecyError", "PowerConstraint", "RateGradient",
    "RatePair", "Strategy", "perturbation_product", "rate_gradient", "secrecy_rates",
    "symmetric_rate", "MaxMinSolution", "SingleUserSolution", "compare_operating_modes",
    "critical_power", "maxmin_point", "p_of_lambda", "single_user_point", "GridSpec",
    "OracleResult", "oracle_max_sum", "oracle_maxmin", "oracle_single_user",
    "RegionEstimate", "hull_contains", "sample_region", "timeshare",
]
