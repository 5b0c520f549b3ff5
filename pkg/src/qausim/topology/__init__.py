"""Scenario description: types, INI files, builders and routing."""
from .builders import (
    build_dumbbell,
    build_parking_lot,
    default_asm_params,
    desk_window_ns,
    with_capacity,
    with_link_delay,
)
from .loader import (
    SCENARIO_DIR,
    ScenarioCheck,
    apply_overrides,
    bundled_scenario,
    check_scenario,
    dump_scenario,
    load_scenario,
    loads_scenario,
    parse_override,
    save_scenario,
    validate_scenario,
)
from .routing import EgressPort, bottleneck_port, build_graph, egress_ports, flow_paths
from .spec import (
    Algorithm,
    ConfigError,
    FlowSpec,
    LinkSpec,
    ScenarioSpec,
    TraceConfig,
    ValidationError,
)

__all__ = [
    "build_dumbbell",
    "build_parking_lot",
    "default_asm_params",
    "desk_window_ns",
    "with_capacity",
    "with_link_delay",
    "SCENARIO_DIR",
    "ScenarioCheck",
    "apply_overrides",
    "bundled_scenario",
    "check_scenario",
    "dump_scenario",
    "load_scenario",
    "loads_scenario",
    "parse_override",
    "save_scenario",
    "validate_scenario",
    "EgressPort",
    "bottleneck_port",
    "build_graph",
    "egress_ports",
    "flow_paths",
    "Algorithm",
    "ConfigError",
    "FlowSpec",
    "LinkSpec",
    "ScenarioSpec",
    "TraceConfig",
    "ValidationError",
]
