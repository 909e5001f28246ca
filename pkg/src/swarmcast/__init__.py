"""Broadcast-steered swarm analysis and simulation.

A velocity command is broadcast to a swarm of gathering agents and detected
by a random subset (the ad-hoc leaders). This package builds the R-disc
visibility graph machinery, predicts the asymptotic group motion in closed
form, integrates the piecewise-constant dynamics exactly, certifies link
preservation, and serves interactive steering sessions.
"""

from .asymptotics import (
    AsymptoticPrediction,
    LeaderSet,
    collective_speed_beta,
    consensus_alpha,
    deviation_gamma,
    find_equivalent_agents,
    predict,
)
from .errors import (
    DegenerateGraphError,
    DisconnectedGraphError,
    InvalidInputError,
    NotApplicableError,
    ScenarioValidationError,
    SizeLimitError,
    SwarmcastError,
)
from .graphs import (
    InfluenceModel,
    VisibilityGraph,
    build_visibility_graph,
    connected_components,
    degree_vector,
    is_complete,
    laplacian,
    normalized_laplacian,
)
from .safety import (
    SafetyCertificate,
    LinkVerdict,
    certify,
    certify_scenario,
    chain_guarantee,
    complete_graph_bound,
    link_condition_uniform,
    subgraph_complete_case,
)
from .simulate import (
    IntervalSpec,
    RunEvent,
    RunLog,
    Scenario,
    ScheduleEntry,
    SwarmEngine,
    SwarmState,
    detect_edge_crossings,
    exact_state,
    integrate_step,
    run_scenario,
    sample_leaders,
)
from .spectral import (
    SpectralDecomposition,
    algebraic_connectivity,
    butler_bound_check,
    interlacing_check,
    scaled_spectrum,
    spectrum,
    symmetric_eig,
    uniform_spectrum,
)

__version__ = "0.1.0"
