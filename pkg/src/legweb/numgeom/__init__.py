from .contact import J, NotLagrangian, contact_pair, normalize, plucker, projective_distance, quadric_residual
from .curves import ParamCurve, control_cubic, load_curve, reference_cubic
from .rank import RankConfig, RankResult, rank_estimate, trace_test
from .web import SampleRejected, concurrency_point, first_integral_check, leaf_data, web_roots

__all__ = [
    "J", "NotLagrangian", "ParamCurve", "RankConfig", "RankResult", "SampleRejected",
    "concurrency_point", "contact_pair", "control_cubic", "first_integral_check", "leaf_data",
    "load_curve", "normalize", "plucker", "projective_distance", "quadric_residual",
    "rank_estimate", "reference_cubic", "trace_test", "web_roots",
]
