from eharqsim.system.config import SystemConfig
from eharqsim.system.failure import packet_failure_prob
from eharqsim.system.resource import (
    ResourceDistribution,
    arrival_distribution,
    conditional_resource_distribution,
    overload_distribution,
    propagate_resource_distribution,
    retransmission_load_distribution,
)
from eharqsim.system.scheduling import (
    SchedulingProbs,
    schedule_within_constraint,
    scheduling_p1,
)
from eharqsim.system.simulator import SimulationResult, simulate_system
from eharqsim.system.sweep import (
    analytic_failure,
    fnr_sweep_system,
    optimal_operating_point,
    thin_curve,
    total_score,
)
