"""Flow admission and routing for networks with per-link security levels.

The library computes all-pairs widest (maximum-bottleneck) paths over a
directed graph whose links carry integer security levels, admits flows whose
minimum requirement the widest path can honor, and drops the rest. On top of
that sit an SLA-driven packet classifier, a seeded benchmark instance
generator, an event-driven controller with a simulated dataplane, and an
HTTP service for live operation.
"""

from .network import (
    EMPTY_PATH,
    INFINITY,
    Edge,
    NetworkError,
    NodeId,
    Path,
    SecureNetwork,
    build_network,
    dump_resources,
    load_resources,
    path_bottleneck,
    path_is_valid_simple,
)
from .widest import WidestPathsResult, all_pairs_widest, oracle_widest, oracle_widest_from
from .solver import (
    Flow,
    FlowError,
    dump_mapping,
    dump_requests,
    load_requests,
    solve,
)
from .sla import (
    ICMP,
    TCP,
    UDP,
    HeaderError,
    HeaderFields,
    SlaError,
    SlaPolicy,
    SlaRule,
    build_header,
    dump_sla,
    load_sla,
    min_security,
    parse_header,
    requirement_resolver,
)
from .generator import GenConfig, GeneratedInstance, generate, write_instance
from .orchestrator import (
    DataplaneState,
    EventKind,
    ForwardingLoopError,
    ForwardingRule,
    Host,
    NetworkEvent,
    OrchestratorError,
    RuleChange,
    TraceResult,
    handle_event,
    initial_state,
    inject_packet,
    replay,
    safety_violations,
)

__version__ = "0.1.0"
