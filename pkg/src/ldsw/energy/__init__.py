"""Energy constraints: bounded falsification, the low-dimensional decision
procedure with its effective-bounds toolkit, and hardness instance generators."""
from .baker import BakerBound, BakerThreshold, audit_threshold, baker_lower_bound, baker_threshold
from .circle import CircleSign, min_on_circle
from .decide import RestrictedSign, RestrictedSignResult, decide_energy_3d, restricted_sign_decision
from .generators import gen_diophantine_instance, gen_positivity_reduction
from .instance import EnergyInstance, EnergyVerdict
from .prefix import level_sequence, prefix_check

__all__ = [
    "BakerBound", "BakerThreshold", "CircleSign", "EnergyInstance", "EnergyVerdict",
    "RestrictedSign", "RestrictedSignResult", "audit_threshold", "baker_lower_bound",
    "baker_threshold", "decide_energy_3d", "gen_diophantine_instance", "gen_positivity_reduction",
    "level_sequence", "min_on_circle", "prefix_check", "restricted_sign_decision",
]
