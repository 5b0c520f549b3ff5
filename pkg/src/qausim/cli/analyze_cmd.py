"""Fluid-model analysis commands. Every kind writes CSV to stdout or --out."""
import functools
import sys
from dataclasses import asdict

import click

from qausim.core.constants import (
    DEFAULT_BUFFER_BYTES,
    DEFAULT_CAPACITY_BPS,
    DEFAULT_Q0_PACKETS,
    EXIT_CHECK_FAILED,
    EXIT_OK,
    PACKET_SIZE_BYTES,
    QCN_STAB_GD,
    QCN_STAB_N,
    QCN_STAB_P,
    QCN_STAB_R_AI_BPS,
    QCN_STAB_W,
)
from qausim.core.receipt import emit_receipt

from .common import exit_code_for, resolve_scenario
from .output import print_error, write_csv


@click.group()
def analyze():
    """Fluid-model analysis: sliding-check, eigen, qcn-tau, h0, fluid-sim,
    delay-bounds, classify, advise."""
    pass


def _emit(kind: str, headers: list[str], rows: list[list], out: str | None) -> None:
    write_csv(headers, rows, out)
    emit_receipt("analysis", {"kind": kind, "rows": len(rows)})


def _fail(e: Exception) -> None:
    print_error(str(e))
    sys.exit(exit_code_for(e))


def fluid_options(f):
    """ASM parameter set as a fluid system, from flags or a scenario's bottleneck."""
    options = [
        click.option("--scenario", help="Take ASM parameters and the bottleneck from a scenario"),
        click.option("--capacity", default=DEFAULT_CAPACITY_BPS, show_default=True,
                     help="Bottleneck capacity, bits/s"),
        click.option("--n-sources", default=3, show_default=True, help="Sources at the bottleneck"),
        click.option("--w", default=None, type=float, help="Weight of dQ in F_b"),
        click.option("--p", default=None, type=float, help="Sampling probability"),
        click.option("--caps", default=None, help="Eight cap fractions of C, comma-separated"),
        click.option("--regime", default="approach", type=click.Choice(["approach", "sliding"]),
                     show_default=True),
        click.option("--q0", default=float(DEFAULT_Q0_PACKETS), show_default=True,
                     help="Queue reference, packets"),
        click.option("--packet-size", default=PACKET_SIZE_BYTES, show_default=True),
        click.option("--buffer-bytes", default=DEFAULT_BUFFER_BYTES, show_default=True),
        click.option("--out", type=click.Path(dir_okay=False), help="Write CSV here"),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _caps(text: str | None):
    from fractions import Fraction

    from qausim.core.constants import ASM_DEFAULT_CAPS

    if text is None:
        return ASM_DEFAULT_CAPS
    try:
        return tuple(float(Fraction(part.strip())) for part in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"not a list of numbers: {text!r}", param_hint="--caps") from None


def _system(opts: dict, regime: str | None = None, tau: float = 0.0):
    """FluidSystem for the selected (or given) regime."""
    from qausim.fluid import FluidSystem
    from qausim.rp import Regime
    from qausim.topology import Algorithm, ConfigError, bottleneck_port, check_scenario
    from qausim.topology import default_asm_params, load_scenario

    regime_enum = Regime(regime or opts["regime"])
    if opts["scenario"]:
        spec = load_scenario(resolve_scenario(opts["scenario"]), check=False)
        if spec.algorithm is not Algorithm.ASM:
            raise ConfigError("fluid analysis needs an ASM scenario", path=opts["scenario"])
        check = check_scenario(spec)
        port = bottleneck_port(spec)
        return FluidSystem.from_asm(spec.asm, check.n_sources, port.capacity_bps,
                                    spec.packet_size_bytes, regime_enum, tau=tau,
                                    q0=spec.q0_packets)
    kwargs = {k: opts[k] for k in ("w", "p") if opts[k] is not None}
    params = default_asm_params(opts["capacity"], opts["buffer_bytes"], opts["packet_size"],
                                caps=_caps(opts["caps"]), **kwargs)
    return FluidSystem.from_asm(params, opts["n_sources"], opts["capacity"], opts["packet_size"],
                                regime_enum, tau=tau, q0=opts["q0"])


def _guarded(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except click.ClickException:
            raise
        except Exception as e:
            _fail(e)
    return wrapper


@analyze.command("sliding-check")
@fluid_options
@_guarded
def sliding_check(**opts):
    """Sliding inequalities for both regimes; exit 1 if either fails."""
    from qausim.fluid import sliding_condition

    rows = []
    for regime in ("approach", "sliding"):
        c = sliding_condition(_system(opts, regime))
        rows.append([regime, c.lhs_minus, c.lhs_plus, c.holds])
    _emit("sliding-check", ["regime", "lhs_minus", "lhs_plus", "holds"], rows, opts["out"])
    sys.exit(EXIT_OK if all(r[3] for r in rows) else EXIT_CHECK_FAILED)


@analyze.command()
@fluid_options
@_guarded
def eigen(**opts):
    """Characteristic roots on each branch."""
    from qausim.fluid import eigenvalues
    from qausim.rp import Branch

    system = _system(opts)
    rows = []
    for branch in Branch:
        lam1, lam2 = eigenvalues(system, branch)
        shape = "spiral" if lam1.imag != 0 else "real"
        rows.append([branch.value, lam1.real, lam1.imag, lam2.real, lam2.imag, shape])
    _emit("eigen", ["branch", "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im", "shape"],
          rows, opts["out"])


@analyze.command("qcn-tau")
@click.option("--capacity", "capacities", multiple=True, type=float, default=(10e9,),
              show_default=True, help="Link capacity, bits/s (repeatable)")
@click.option("--n", "n", default=QCN_STAB_N, show_default=True,
              help="Number of sources; the bound scales with C/N, so --n 10 gives ten times it")
@click.option("--p-s", default=QCN_STAB_P, show_default=True)
@click.option("--gd", default=QCN_STAB_GD, show_default=True)
@click.option("--w", default=float(QCN_STAB_W), show_default=True)
@click.option("--r-ai-bps", default=QCN_STAB_R_AI_BPS, show_default=True)
@click.option("--cubic", is_flag=True, help="Use a4^3 under the inner root of omega*")
@click.option("--out", type=click.Path(dir_okay=False), help="Write CSV here")
@_guarded
def qcn_tau(capacities, n, p_s, gd, w, r_ai_bps, cubic, out):
    """Delay lower bound of QCN stability per capacity.

    Defaults to one source (N=1): about 271 us at 10 Gbps and 27 us at 100 Gbps.
    The shipped parameter set lists N=10; pass --n 10 for that load, which
    multiplies the bound by ten.
    """
    from qausim.fluid import (
        FluidAnalysisError,
        QcnStabilityParams,
        loop_gain_crossover,
        qcn_delay_lower_bound,
    )

    rows = []
    for capacity in capacities:
        params = QcnStabilityParams(capacity, n=n, p_s=p_s, gd=gd, w=w, r_ai_bps=r_ai_bps,
                                    omega_star_quartic=not cubic)
        tau = qcn_delay_lower_bound(params)
        try:
            crossover = loop_gain_crossover(params)
        except FluidAnalysisError:
            crossover = None
        rows.append([capacity, tau, tau * 1e6, params.omega_bar, params.omega_star, crossover])
    _emit("qcn-tau", ["capacity_bps", "tau_min_s", "tau_min_us", "omega_bar", "omega_star",
                      "crossover_rad_s"], rows, out)


@analyze.command()
@fluid_options
@click.option("--tau", required=True, type=float, help="Feedback delay, seconds")
@click.option("--L", "L", default=1.0, show_default=True, help="|x1|+|x2| at the state of interest")
@_guarded
def h0(tau, L, **opts):
    """Half-width of the region around q0 where the delay can stall sliding."""
    from qausim.fluid import delay_robustness_bounds, h0_width

    system = _system(opts)
    e1 = delay_robustness_bounds(system, tau, L).e1_bound
    width = h0_width(system, e1)
    _emit("h0", ["tau_s", "e1_bound", "D_pkts", "minus_term", "plus_term"],
          [[tau, e1, width.D, width.minus_term, width.plus_term]], opts["out"])


@analyze.command("delay-bounds")
@fluid_options
@click.option("--tau", "taus", required=True, multiple=True, type=float,
              help="Feedback delay, seconds (repeatable)")
@click.option("--L", "L", default=1.0, show_default=True)
@_guarded
def delay_bounds(taus, L, **opts):
    """Bounds on the delay error, its disturbance and the parameter drift."""
    from qausim.fluid import delay_robustness_bounds

    system = _system(opts)
    records = [asdict(delay_robustness_bounds(system, tau, L)) for tau in taus]
    headers = list(records[0])
    _emit("delay-bounds", headers, [[r[h] for h in headers] for r in records], opts["out"])


@analyze.command("fluid-sim")
@fluid_options
@click.option("--tau", default=0.0, show_default=True, help="Feedback delay, seconds")
@click.option("--x0", default="50,0", show_default=True, help="x1 (pkts), x2 (pkts/s)")
@click.option("--t-end", default=0.3, show_default=True, help="Seconds")
@click.option("--dt", default=1e-5, show_default=True, help="Step, seconds")
@click.option("--sample-every", default=10, show_default=True)
@click.option("--rule", default="wedge_damped", type=click.Choice(["wedge_damped", "product_sign"]),
              show_default=True)
@click.option("--branch", type=click.Choice(["plus", "minus"]), help="Freeze one branch")
@_guarded
def fluid_sim(tau, x0, t_end, dt, sample_every, rule, branch, **opts):
    """Integrate the switched fluid model and print the Q/R trajectory."""
    from qausim.fluid import integrate_fluid
    from qausim.rp import Branch, SwitchingRule

    try:
        x1, x2 = (float(v) for v in x0.split(","))
    except ValueError:
        raise click.BadParameter(f"expected 'x1,x2', got {x0!r}", param_hint="--x0") from None
    system = _system(opts, tau=tau)
    traj = integrate_fluid(system, t_end, dt, (x1, x2),
                           branch=Branch(branch) if branch else None,
                           rule=SwitchingRule(rule), sample_every=sample_every)
    rows = [[float(t), float(a + system.q0), float(a), float(b), float(f),
             "plus" if s > 0 else "minus"]
            for t, a, b, f, s in zip(traj.t, traj.x1, traj.x2, traj.fb, traj.branch)]
    _emit("fluid-sim", ["t_s", "q_pkts", "x1_pkts", "x2_pkts_per_s", "fb", "branch"],
          rows, opts["out"])


@analyze.command()
@fluid_options
@click.option("--region-sign", required=True, type=click.Choice(["-1", "1"]),
              help="Sign of Q_f*F_b in the region")
@click.option("--rule", default="wedge_damped", type=click.Choice(["wedge_damped", "product_sign"]),
              show_default=True)
def classify(region_sign, rule, **opts):
    """Trajectory shape in a region; exit 1 when classification is refused."""
    from qausim.fluid import FluidAnalysisError, Spiral, classify_trajectory
    from qausim.rp import SwitchingRule

    try:
        shape = classify_trajectory(_system(opts), int(region_sign), SwitchingRule(rule))
    except FluidAnalysisError as e:
        print_error(str(e))
        sys.exit(EXIT_CHECK_FAILED)
    except click.ClickException:
        raise
    except Exception as e:
        _fail(e)

    if isinstance(shape, Spiral):
        row = [region_sign, "spiral", shape.lambda1, shape.lambda2, None, None]
    else:
        row = [region_sign, "parabola", shape.lambda1, shape.lambda2,
               shape.sigma_slope, shape.omega_slope]
    _emit("classify", ["region_sign", "shape", "lambda1", "lambda2", "sigma_slope",
                       "omega_slope"], [row], opts["out"])


@analyze.command()
@fluid_options
@click.option("--tau", default=0.0, show_default=True, help="Feedback delay, seconds")
@click.option("--L", "L", default=1.0, show_default=True)
@_guarded
def advise(tau, L, **opts):
    """Sliding margins, H0 terms and drift per regime, with tuning hints."""
    from qausim.fluid import advise as advise_params

    rows = []
    for regime in ("approach", "sliding"):
        a = advise_params(_system(opts, regime), tau, L)
        rows.append([regime, a.holds, a.lhs_minus, a.lhs_plus, a.h0_minus, a.h0_plus,
                     a.drift_amplitude, "; ".join(a.hints)])
    _emit("advise", ["regime", "holds", "lhs_minus", "lhs_plus", "h0_minus", "h0_plus",
                     "drift_amplitude", "hints"], rows, opts["out"])
