"""INI scenario files: load, validate, dump and override.

Sections: [scenario], [trace], [asm], [qcn], [link.<id>], [flow.<id>].
Keys carry their unit in the name (capacity_bps, delay_ns, ...). Numbers
may be written as integers, decimals, exponents or fractions (1/8).
"""
import configparser
import io
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from qausim.core.constants import (
    ASM_DEFAULT_CAPS,
    ASM_MIN_WEDGE_WEIGHT,
    DEFAULT_BUFFER_BYTES,
    DEFAULT_Q0_PACKETS,
    PACKET_SIZE_BYTES,
)
from qausim.core.receipt import emit_receipt
from qausim.fluid.sliding import SlidingCheck, sliding_condition
from qausim.fluid.system import FluidSystem
from qausim.rp.asm import COEFFICIENT_NAMES, AsmParams, Regime
from qausim.rp.qcn import QcnParams
from qausim.rp.switching import SwitchingRule

from .builders import default_asm_params, desk_window_ns, random_start
from .routing import bottleneck_port, flow_paths, port_flow_counts
from .spec import (
    Algorithm,
    ConfigError,
    FlowSpec,
    LinkSpec,
    ScenarioSpec,
    TraceConfig,
    ValidationError,
)

logger = logging.getLogger("qausim.topology")

SCENARIO_DIR = Path(__file__).parent / "scenarios"

__all__ = [
    "ConfigError",
    "ValidationError",
    "ScenarioCheck",
    "SCENARIO_DIR",
    "apply_overrides",
    "bundled_scenario",
    "check_scenario",
    "dump_scenario",
    "load_scenario",
    "loads_scenario",
    "parse_override",
    "save_scenario",
    "validate_scenario",
]


@dataclass
class ScenarioCheck:
    bottleneck: str
    n_sources: int
    sliding: dict[str, SlidingCheck] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.sliding.values())


# -----------------------------------------------------------------------------
# Parsing helpers
# -----------------------------------------------------------------------------

def _new_parser() -> configparser.ConfigParser:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    parser.optionxform = str  # coefficient names are case-sensitive
    return parser


def _number(parser, section: str, key: str, path: str | None) -> Fraction:
    raw = parser.get(section, key)
    try:
        return Fraction(raw.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a number: {raw!r}", path=path, section=section, key=key) from None


def _float(parser, section, key, path, default=None):
    if not parser.has_option(section, key):
        if default is None:
            raise ConfigError("missing key", path=path, section=section, key=key)
        return default
    return float(_number(parser, section, key, path))


def _int(parser, section, key, path, default=None):
    if not parser.has_option(section, key):
        if default is None:
            raise ConfigError("missing key", path=path, section=section, key=key)
        return default
    value = _number(parser, section, key, path)
    if value.denominator != 1:
        raise ConfigError(f"expected an integer, got {value}", path=path, section=section, key=key)
    return int(value)


def _number_list(parser, section, key, path) -> list[Fraction]:
    raw = parser.get(section, key)
    try:
        return [Fraction(part.strip()) for part in raw.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a number list: {raw!r}", path=path, section=section, key=key) from None


def _bool(parser, section, key, path, default: bool) -> bool:
    if not parser.has_option(section, key):
        return default
    try:
        return parser.getboolean(section, key)
    except ValueError:
        raise ConfigError("not a boolean", path=path, section=section, key=key) from None


def _read(text: str, path: str | None) -> configparser.ConfigParser:
    parser = _new_parser()
    try:
        parser.read_string(text, source=path or "<string>")
    except configparser.ParsingError as e:
        line = e.errors[0][0] if e.errors else None
        raise ConfigError("unparseable line", path=path, line=line) from None
    except (configparser.DuplicateSectionError, configparser.DuplicateOptionError) as e:
        raise ConfigError(e.message, path=path, line=e.lineno, section=e.section) from None
    except configparser.MissingSectionHeaderError as e:
        raise ConfigError("missing section header", path=path, line=e.lineno) from None
    return parser


# -----------------------------------------------------------------------------
# Overrides
# -----------------------------------------------------------------------------

def parse_override(text: str) -> tuple[str, str, str]:
    """'asm.w=16' -> ('asm', 'w', '16'); 'flow.f1.start_ns=0' -> ('flow.f1', 'start_ns', '0')."""
    if "=" not in text:
        raise ConfigError(f"override must be key=value, got {text!r}")
    dotted, value = text.split("=", 1)
    if "." not in dotted:
        raise ConfigError(f"override key must be section.key, got {dotted!r}")
    section, key = dotted.strip().rsplit(".", 1)
    return section, key, value.strip()


def _apply_to_parser(parser: configparser.ConfigParser, overrides: Iterable[str]) -> None:
    for text in overrides:
        section, key, value = parse_override(text)
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key, value)
        logger.info("override [%s] %s = %s", section, key, value)


def apply_overrides(spec: ScenarioSpec, overrides: Iterable[str]) -> ScenarioSpec:
    """Patch a built spec through its dumped form. Random starts stay resolved."""
    overrides = list(overrides)
    if not overrides:
        return spec
    parser = _read(dump_scenario(spec), None)
    _apply_to_parser(parser, overrides)
    return _spec_from_parser(parser, None)


# -----------------------------------------------------------------------------
# Building the ScenarioSpec
# -----------------------------------------------------------------------------

def _asm_from_parser(parser, path, capacity_bps, buffer_bytes, packet_size) -> AsmParams:
    s = "asm"
    kwargs = {}
    if parser.has_section(s):
        for key, name in (("w", "w"), ("p", "p"), ("b0", "b_0"), ("bf", "b_f"),
                          ("r_min_bps", "r_min")):
            if parser.has_option(s, key):
                kwargs[name] = _float(parser, s, key, path)
        if parser.has_option(s, "switching"):
            raw = parser.get(s, "switching").strip().upper()
            try:
                kwargs["switching"] = SwitchingRule[raw]
            except KeyError:
                raise ConfigError(f"unknown switching rule {raw.lower()!r}",
                                  path=path, section=s, key="switching") from None
    caps = ASM_DEFAULT_CAPS
    if parser.has_option(s, "caps"):
        caps = tuple(float(c) for c in _number_list(parser, s, "caps", path))
    try:
        params = default_asm_params(capacity_bps, buffer_bytes, packet_size, caps=caps, **kwargs)
        explicit = {name: _float(parser, s, name, path)
                    for name in COEFFICIENT_NAMES if parser.has_option(s, name)}
        return replace(params, **explicit) if explicit else params
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ValidationError("ASM parameters", str(e), path=path, section=s) from None


def _qcn_from_parser(parser, path) -> QcnParams:
    s = "qcn"
    if not parser.has_section(s):
        return QcnParams()
    kwargs = {}
    for key, name in (("w", "w"), ("p", "p"), ("gd", "gd"), ("r_ai_bps", "r_ai"),
                      ("r_hai_bps", "r_hai"), ("r_min_bps", "r_min")):
        if parser.has_option(s, key):
            kwargs[name] = _float(parser, s, key, path)
    for key, name in (("bc_limit_bytes", "bc_limit"), ("fr_cycles", "fr_cycles"),
                      ("timer_period_ns", "timer_period_ns")):
        if parser.has_option(s, key):
            kwargs[name] = _int(parser, s, key, path)
    for key in ("trr", "efr", "hai"):
        if parser.has_option(s, key):
            kwargs[key] = _bool(parser, s, key, path, False)
    try:
        return QcnParams(**kwargs)
    except ValueError as e:
        raise ValidationError("QCN parameters", str(e), path=path, section=s) from None


def _flow_from_parser(parser, section, path, seed, packet_size) -> FlowSpec:
    flow_id = section.split(".", 1)[1]
    for key in ("source", "sink", "initial_rate_bps"):
        if not parser.has_option(section, key):
            raise ConfigError("missing key", path=path, section=section, key=key)

    if parser.has_option(section, "random_start_ns"):
        window = _number_list(parser, section, "random_start_ns", path)
        if len(window) != 2 or window[0] > window[1]:
            raise ConfigError("random_start_ns must be 'low, high'",
                              path=path, section=section, key="random_start_ns")
        start = random_start(seed, flow_id, int(window[0]), int(window[1]))
        length = _int(parser, section, "duration_after_start_ns", path)
        stop: int | None = start + length
    else:
        start = _int(parser, section, "start_ns", path, default=0)
        stop = _int(parser, section, "stop_ns", path) if parser.has_option(section, "stop_ns") else None

    return FlowSpec(
        flow_id=flow_id,
        source=parser.get(section, "source").strip(),
        sink=parser.get(section, "sink").strip(),
        start_ns=start,
        stop_ns=stop,
        initial_rate_bps=_float(parser, section, "initial_rate_bps", path),
        packet_size_bytes=_int(parser, section, "packet_size_bytes", path, default=packet_size),
    )


def _spec_from_parser(parser: configparser.ConfigParser, path: str | None) -> ScenarioSpec:
    s = "scenario"
    if not parser.has_section(s):
        raise ConfigError("missing [scenario] section", path=path)

    raw_alg = parser.get(s, "algorithm", fallback="asm").strip().lower()
    try:
        algorithm = Algorithm(raw_alg)
    except ValueError:
        raise ConfigError(f"unknown algorithm {raw_alg!r}", path=path, section=s,
                          key="algorithm") from None

    seed = _int(parser, s, "seed", path, default=1)
    buffer_bytes = _int(parser, s, "buffer_bytes", path, default=DEFAULT_BUFFER_BYTES)
    q0 = _float(parser, s, "q0_packets", path, default=float(DEFAULT_Q0_PACKETS))
    packet_size = _int(parser, s, "packet_size_bytes", path, default=PACKET_SIZE_BYTES)

    links = []
    flows = []
    for section in parser.sections():
        if section.startswith("link."):
            for key in ("a", "b", "capacity_bps"):
                if not parser.has_option(section, key):
                    raise ConfigError("missing key", path=path, section=section, key=key)
            links.append(LinkSpec(
                link_id=section.split(".", 1)[1],
                a=parser.get(section, "a").strip(),
                b=parser.get(section, "b").strip(),
                capacity_bps=_float(parser, section, "capacity_bps", path),
                delay_ns=_int(parser, section, "delay_ns", path, default=0),
            ))
        elif section.startswith("flow."):
            flows.append(_flow_from_parser(parser, section, path, seed, packet_size))
        elif section not in ("scenario", "trace", "asm", "qcn"):
            raise ConfigError("unknown section", path=path, section=section)
    if not links:
        raise ValidationError("at least one link", "no [link.*] sections", path=path)

    capacity = min(link.capacity_bps for link in links)
    duration = _int(parser, s, "duration_ns", path, default=desk_window_ns(capacity))
    trace = TraceConfig.for_capacity(capacity)
    if parser.has_option("trace", "period_ns"):
        trace = TraceConfig(_int(parser, "trace", "period_ns", path))

    algo_kwargs: dict = {}
    if algorithm is Algorithm.ASM:
        algo_kwargs["asm"] = _asm_from_parser(parser, path, capacity, buffer_bytes, packet_size)
    else:
        algo_kwargs["qcn"] = _qcn_from_parser(parser, path)

    return ScenarioSpec(
        name=parser.get(s, "name", fallback=Path(path).stem if path else "scenario").strip(),
        algorithm=algorithm,
        links=tuple(links),
        flows=tuple(flows),
        duration_ns=duration,
        buffer_bytes=buffer_bytes,
        q0_packets=q0,
        packet_size_bytes=packet_size,
        seed=seed,
        trace=trace,
        **algo_kwargs,
    )


# -----------------------------------------------------------------------------
# Validation
# -----------------------------------------------------------------------------

def check_scenario(spec: ScenarioSpec) -> ScenarioCheck:
    """Routing, NIC-rate and (for ASM) sliding-existence checks.

    Structural problems raise ValidationError; the sliding check is only
    reported so `validate` can print both regimes.
    """
    paths = flow_paths(spec)
    for flow in spec.flows:
        nic = spec.nic_capacity(flow.source)
        if flow.initial_rate_bps > nic:
            raise ValidationError("initial rate <= NIC capacity",
                                  f"{flow.flow_id}: {flow.initial_rate_bps} > {nic}")
    counts = port_flow_counts(spec, paths)
    port = bottleneck_port(spec, paths)
    n_sources = max(1, counts[(port.node, port.peer)])
    check = ScenarioCheck(bottleneck=port.name, n_sources=n_sources)

    if spec.algorithm is Algorithm.ASM:
        for regime in Regime:
            system = FluidSystem.from_asm(spec.asm, n_sources, port.capacity_bps,
                                          spec.packet_size_bytes, regime)
            check.sliding[regime.value] = sliding_condition(system)
        if spec.asm.w < ASM_MIN_WEDGE_WEIGHT:
            msg = (f"w={spec.asm.w} < {ASM_MIN_WEDGE_WEIGHT}: the region between F_b=0 and "
                   f"q=q0 is narrow and sampled feedback may skip it")
            check.warnings.append(msg)
            logger.warning(msg)
    return check


def validate_scenario(spec: ScenarioSpec) -> ScenarioCheck:
    """check_scenario, raising when the sliding condition fails."""
    check = check_scenario(spec)
    for regime, result in check.sliding.items():
        if not result.holds:
            raise ValidationError(
                "sliding condition",
                f"regime {regime}: lhs_minus={result.lhs_minus:.6g} (needs < 0), "
                f"lhs_plus={result.lhs_plus:.6g} (needs > 0)",
            )
    return check


# -----------------------------------------------------------------------------
# Public entry points
# -----------------------------------------------------------------------------

def loads_scenario(text: str, overrides: Iterable[str] = (), path: str | None = None,
                   check: bool = True) -> ScenarioSpec:
    parser = _read(text, path)
    _apply_to_parser(parser, overrides)
    spec = _spec_from_parser(parser, path)
    if check:
        validate_scenario(spec)
    emit_receipt("scenario_load", {
        "scenario": spec.name,
        "algorithm": spec.algorithm.value,
        "n_flows": len(spec.flows),
        "n_links": len(spec.links),
        "seed": spec.seed,
    })
    return spec


def load_scenario(path: str | Path, overrides: Iterable[str] = (),
                  check: bool = True) -> ScenarioSpec:
    """Read, override, build and validate a scenario file.

    Raises:
        ConfigError: unreadable or unparseable file
        ValidationError: an invariant does not hold
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read scenario: {e.strerror}", path=str(path)) from None
    return loads_scenario(text, overrides, str(path), check)


def bundled_scenario(name: str) -> Path:
    """Path of a shipped scenario, by name with or without .cfg."""
    fname = name if name.endswith(".cfg") else f"{name}.cfg"
    path = SCENARIO_DIR / fname
    if not path.exists():
        raise ConfigError(f"no bundled scenario {name!r}")
    return path


def dump_scenario(spec: ScenarioSpec) -> str:
    """INI text that loads back into an equal spec."""
    parser = _new_parser()
    parser["scenario"] = {
        "name": spec.name,
        "algorithm": spec.algorithm.value,
        "seed": str(spec.seed),
        "buffer_bytes": str(spec.buffer_bytes),
        "q0_packets": repr(float(spec.q0_packets)),
        "packet_size_bytes": str(spec.packet_size_bytes),
        "duration_ns": str(spec.duration_ns),
    }
    parser["trace"] = {"period_ns": str(spec.trace.period_ns)}

    if spec.asm is not None:
        asm = spec.asm
        section = {
            "w": repr(float(asm.w)),
            "p": repr(float(asm.p)),
            "b0": repr(float(asm.b_0)),
            "bf": repr(float(asm.b_f)),
            "r_min_bps": repr(float(asm.r_min)),
            "switching": asm.switching.name.lower(),
            "caps": ", ".join(repr(float(c)) for c in asm.caps),
        }
        section.update({name: repr(float(v)) for name, v in asm.coefficients().items()})
        parser["asm"] = section
    if spec.qcn is not None:
        qcn = spec.qcn
        section = {
            "w": repr(float(qcn.w)),
            "p": repr(float(qcn.p)),
            "gd": repr(float(qcn.gd)),
            "bc_limit_bytes": str(qcn.bc_limit),
            "fr_cycles": str(qcn.fr_cycles),
            "r_ai_bps": repr(float(qcn.r_ai)),
            "r_hai_bps": repr(float(qcn.r_hai)),
            "r_min_bps": repr(float(qcn.r_min)),
            "trr": str(qcn.trr).lower(),
            "efr": str(qcn.efr).lower(),
            "hai": str(qcn.hai).lower(),
        }
        if qcn.timer_period_ns is not None:
            section["timer_period_ns"] = str(qcn.timer_period_ns)
        parser["qcn"] = section

    for link in spec.links:
        parser[f"link.{link.link_id}"] = {
            "a": link.a,
            "b": link.b,
            "capacity_bps": repr(float(link.capacity_bps)),
            "delay_ns": str(link.delay_ns),
        }
    for flow in spec.flows:
        section = {
            "source": flow.source,
            "sink": flow.sink,
            "start_ns": str(flow.start_ns),
            "initial_rate_bps": repr(float(flow.initial_rate_bps)),
            "packet_size_bytes": str(flow.packet_size_bytes),
        }
        if flow.stop_ns is not None:
            section["stop_ns"] = str(flow.stop_ns)
        parser[f"flow.{flow.flow_id}"] = section

    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def save_scenario(spec: ScenarioSpec, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(dump_scenario(spec))
    return path
