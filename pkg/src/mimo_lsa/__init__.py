"""Uplink SINR of multi-cell massive MIMO under pilot contamination.

Finite-size Monte Carlo (matched filter, MMSE, LMS) alongside the
large-system limit of the matched-filter SINR.
"""
from .asymptotics import (UserGainProfile, asymptotic_sinr, classify_scenario, marzetta_limit,
                          tse_hanly_sinr)
from .channel import (ChannelSet, PilotEstimate, assemble_received, compose_channels,
                      pilot_estimate, sample_small_scale)
from .config import CoherenceBudget, SystemConfig
from .errors import ConfigError, DegenerateInputError, DivergenceError
from .geometry import (CellLayout, DropModel, GainTensor, LinkBudget, UserDrop, build_hex_layout,
                       compute_gains, cost231_pathloss_db, drop_users, equal_power_gains)
from .kernels import BACKEND
from .receivers import (LmsState, SinrSample, filter_sinr, lms_train, matched_filter_sinr,
                        mmse_filter, mmse_sinr)
from .rng import Stream, mix_seed

__version__ = "0.1.0"
