"""Call admission control for pre-smoothed VBR video streams."""
from ._kernels import BACKEND
from .admission import (
    AdmissionResult,
    ForbiddenInterval,
    feasible,
    forbidden_interval,
    min_displacement,
    min_displacement_morph,
    min_displacement_naive,
    min_displacement_oracle,
)
from .envelope import (
    Channel,
    Peak,
    StreamEnvelope,
    height_at,
    normalize,
    shift,
    sum_envelopes,
    validate,
)
from .multistream import (
    MultiInstance,
    MultiScheduleResult,
    exact_small,
    greedy_sequential,
    verify_schedule,
)

__version__ = "0.1.0"
