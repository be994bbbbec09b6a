"""Command-line driver: one subcommand per diagnostic, JSON or CSV reports.

Exit status is 0 on success whatever the verdicts, 2 for malformed input
and 3 when a quadrature fails to converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import diagnostics as dg
from . import expansions as ex
from . import kernels as kn
from . import multipliers as mp
from .weights import QuadratureError, blocks, parse_weight, regularize

SUBCOMMANDS = (
    "kernel-l1",
    "cutoff-check",
    "cesaro-check",
    "membership",
    "equivalence",
    "gap",
    "regular-growth",
    "multiplier-criterion",
    "theorem-mult",
    "regularize",
    "fn-bound",
)

# option name -> (type, default); ``None`` defaults mean "not set"
OPTIONS = {
    "N": (int, 1),
    "family": (str, "cesaro"),
    "m": (float, None),
    "n": (int, None),
    "kmax": (int, 128),
    "u": (str, None),
    "J": (int, 14),
    "g": (str, None),
    "g_tilde": (str, None),
    "weights": (str, None),
    "f": (str, None),
    "q": (str, None),
    "multiplier": (str, None),
    "target": (str, None),
    "case": (str, None),
    "direction": (str, "inverse"),
    "alpha": (float, None),
    "p": (str, "inf"),
    "d": (float, None),
    "jmax": (int, 12),
    "nmax": (int, 256),
    "A": (float, 2.0),
    "blocks": (int, 12),
    "probes": (int, 3),
    "eps": (float, None),
    "factor": (float, 100.0),
    "output": (str, None),
    "format": (str, "json"),
}


class ConfigError(ValueError):
    pass


def _fmt_value(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass(frozen=True)
class RunConfig:
    """A subcommand plus its options; unset options are omitted from the text form."""

    subcommand: str
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"unknown subcommand {self.subcommand!r}")
        clean = {}
        for key, value in self.options.items():
            if key not in OPTIONS:
                raise ConfigError(f"unknown option {key!r}")
            if value is None:
                continue
            typ = OPTIONS[key][0]
            try:
                clean[key] = typ(value)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key}: {value!r}") from exc
        if clean.get("format", "json") not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        object.__setattr__(self, "options", dict(sorted(clean.items())))

    def get(self, key):
        return self.options.get(key, OPTIONS[key][1])

    def require(self, key):
        v = self.get(key)
        if v is None:
            raise ConfigError(f"{self.subcommand} needs --{key.replace('_', '-')}")
        return v

    def to_text(self) -> str:
        lines = [f"subcommand={self.subcommand}"]
        lines += [f"{k}={_fmt_value(v)}" for k, v in self.options.items()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        values = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"line {lineno}: expected key=value")
            values[key.strip().replace("-", "_")] = value.strip()
        sub = values.pop("subcommand", None)
        if sub is None:
            raise ConfigError("config has no subcommand")
        return cls(sub, values)


# -- mini-languages ------------------------------------------------------------


def parse_expansion(text: str, N: int = 1, J: int = 14) -> ex.HarmonicExpansion:
    """``gap:pow2``, ``const:C``, ``harmonic:K``, ``poisson:RHO`` or ``file:PATH``."""
    head, _, arg = text.partition(":")
    try:
        if head == "gap" and arg == "pow2":
            return ex.dyadic_gap_series(J)
        if head == "const":
            return ex.HarmonicExpansion.constant(N, float(arg), "full" if N <= 2 else "zonal")
        if head == "harmonic":
            k = int(arg)
            if N <= 2:
                return ex.HarmonicExpansion.single(N, k)
            return ex.HarmonicExpansion(N, "zonal", {k: [1.0]})
        if head == "poisson":
            rho = float(arg)
            K = kn.poisson_degree(N, rho)
            return ex.HarmonicExpansion.zonal(N, rho ** np.arange(K + 1))
        if head == "file":
            return ex.read_expansion_csv(arg)
    except (OSError, KeyError) as exc:
        raise ConfigError(f"cannot read expansion {text!r}: {exc}") from exc
    raise ConfigError(f"unknown function spec {text!r}")


def parse_multiplier(text: str, cfg: RunConfig | None = None) -> mp.MultiplierSeq:
    """``one``, ``hf:W``, ``hfinv:W``, ``iq:W``, ``logratio``, ``blocksqrtinv`` or ``file:PATH``."""
    head, _, arg = text.partition(":")
    if head == "one":
        return mp.one()
    if head == "logratio":
        return mp.log_ratio_multiplier()
    if head == "hf":
        return mp.hf_multiplier(parse_weight(arg))
    if head == "hfinv":
        return mp.hf_inv_multiplier(parse_weight(arg))
    if head == "iq":
        return mp.iq_multiplier(parse_weight(arg))
    if head == "blocksqrtinv":
        w = parse_weight(arg) if arg else parse_weight("pow:1")
        A = cfg.get("A") if cfg else 2.0
        k_max = cfg.get("blocks") if cfg else 12
        return mp.block_sqrt_inv(blocks(w, A, k_max))
    if head == "file":
        return mp.read_multiplier_csv(arg)
    raise ConfigError(f"unknown multiplier spec {text!r}")


def _p(cfg):
    text = cfg.get("p")
    return np.inf if text in ("inf", "infinity") else float(text)


def _weight(cfg, key):
    return parse_weight(cfg.require(key))


def _u(cfg):
    u = parse_expansion(cfg.require("u"), cfg.get("N"), cfg.get("J"))
    if cfg.get("multiplier"):
        u = mp.apply_multiplier(u, parse_multiplier(cfg.get("multiplier"), cfg))
    return u


def _d(cfg):
    d = cfg.get("d")
    return kn.default_d(cfg.get("N")) if d is None else d


def _table(columns, rows, **meta):
    return {"columns": list(columns), "rows": [list(r) for r in rows], **meta}


# -- subcommands ------------------------------------------------------------------


def _kernel_l1(cfg):
    N, kmax, fam = cfg.get("N"), cfg.get("kmax"), cfg.get("family")
    rows = []
    if fam == "cesaro":
        m = cfg.get("m") if cfg.get("m") is not None else float(N)
        for k in range(kmax + 1):
            P = kn.cesaro_kernel(N, k, m)
            rows.append((k, kn.l1_norm(P), kn.min_on_nodes(P)))
        return _table(("k", "l1", "min"), rows, family="cesaro", N=N, m=m)
    if fam == "vp":
        m = int(cfg.get("m") or 0)
        for n in range(1, kmax + 1):
            P = kn.vp_kernel(N, m, n)
            rows.append((n, kn.l1_norm(P), kn.min_on_nodes(P)))
        return _table(("n", "l1", "min"), rows, family="vp", N=N, m=m)
    raise ConfigError("family must be cesaro or vp")


def _cutoff_check(cfg):
    m = int(cfg.get("m") or 0)
    d = int(cfg.get("d") or kn.default_d(cfg.get("N")))
    q = kn.cutoff_profile(m, d)
    rows = []
    for j in range(d + 2):
        left = float(np.log(q.a_m) ** j * q.a_m)
        right = float(q.derivative(np.array([1.0 + 1e-12]), j)[0])
        end = float(q.derivative(np.array([2.0 - 1e-12]), j)[0])
        rows.append((j, left, right, end))
    return _table(("j", "left_at_1", "bridge_at_1", "bridge_at_2"), rows, m=m, d=d, a_m=q.a_m, deriv_bound=q.deriv_bound)


def _cesaro_check(cfg):
    g = _weight(cfg, "g")
    m = cfg.get("m") if cfg.get("m") is not None else 1.0
    return dg.estimate_with_A_check(g, m, dg.dyadic_radii(cfg.get("jmax"), 1)).to_dict()


def _grids(cfg):
    j = cfg.get("jmax")
    return dg.dyadic_radii(j), dg.dyadic_degrees(j)


def _membership(cfg):
    rep = dg.equivalence_report(_u(cfg), _weight(cfg, "g"), _p(cfg), _d(cfg), _grids(cfg), cfg.get("factor"))
    return rep.to_dict()


def _equivalence(cfg):
    names = [w for w in cfg.require("weights").split(";") if w.strip()]
    ws = [parse_weight(w) for w in names]
    suite = dg.equivalence_suite(_u(cfg), ws, _p(cfg), _d(cfg), _grids(cfg), cfg.get("factor"))
    return {name: rep.to_dict() for name, rep in suite.items()}


def _gap(cfg):
    J = cfg.get("J")
    deg = np.array([2.0**j for j in range(J + 1)])
    amps = deg.copy()
    if cfg.get("multiplier"):
        lam = parse_multiplier(cfg.get("multiplier"), cfg)
        amps = amps * lam.degree_values(np.array([2**j for j in range(J + 1)], dtype=np.int64))
    return dg.gap_membership(deg, amps, _weight(cfg, "g")).to_dict()


def _regular_growth(cfg):
    f = _weight(cfg, "f")
    B = blocks(f, cfg.get("A"), cfg.get("blocks"))
    if cfg.get("u"):
        u = _u(cfg)
    else:
        fv = np.asarray(f(np.array(B.cuts, dtype=float)), dtype=float)
        u = ex.gap_series(B.cuts, np.diff(np.concatenate([[0.0], fv])))
    direction = cfg.get("direction")
    if direction == "control":
        return dg.regular_growth_ratio(u, B, _p(cfg), cfg.get("probes")).to_dict()
    if direction == "forward" and not cfg.get("u"):
        u = mp.apply_hf_inv(u, f)
    return mp.regular_growth_mapping_check(u, f, B, _p(cfg), direction, cfg.get("probes")).to_dict()


def _multiplier_criterion(cfg):
    lam = parse_multiplier(cfg.get("multiplier") or "one", cfg)
    g = _weight(cfg, "g")
    gt = parse_weight(cfg.get("g_tilde")) if cfg.get("g_tilde") else g
    n_grid = dg.dyadic_degrees(int(np.log2(cfg.get("nmax"))))
    return mp.multiplier_criterion(lam, g, gt, _d(cfg), n_grid, cfg.get("N"), cfg.get("eps")).to_dict()


def _theorem_mult(cfg):
    case = cfg.require("case")
    target = parse_weight(cfg.get("target")) if cfg.get("target") else None
    rep = mp.theorem_mult_check(
        _u(cfg), _weight(cfg, "f"), _weight(cfg, "g"), case, _p(cfg), _d(cfg),
        dg.dyadic_degrees(cfg.get("jmax")), target, cfg.get("eps") or 0.5,
    )
    return rep.to_dict()


def _regularize(cfg):
    q = _weight(cfg, "q")
    alpha = cfg.require("alpha")
    return _table(("alpha", "f"), [(alpha, regularize(q, alpha))], q=q.name)


def _fn_bound(cfg):
    f = _weight(cfg, "f")
    d = int(_d(cfg))
    return mp.fn_bound_check(f, d, range(1, cfg.get("nmax") + 1)).to_dict()


HANDLERS = {
    "kernel-l1": _kernel_l1,
    "cutoff-check": _cutoff_check,
    "cesaro-check": _cesaro_check,
    "membership": _membership,
    "equivalence": _equivalence,
    "gap": _gap,
    "regular-growth": _regular_growth,
    "multiplier-criterion": _multiplier_criterion,
    "theorem-mult": _theorem_mult,
    "regularize": _regularize,
    "fn-bound": _fn_bound,
}


# -- output ------------------------------------------------------------------------


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return "inf" if np.isinf(v) else v
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _rows_for_csv(result):
    """Flatten a table, a report or a map of reports into header + rows."""
    if "columns" in result:
        return result["columns"], result["rows"]
    if "grid" in result:
        reports = {"": result}
    elif "reports" in result:
        reports = result["reports"]
    else:
        reports = {}
        for name, sub in result.items():
            for crit, rep in sub.get("reports", {"": sub}).items():
                reports[f"{name}/{crit}" if crit else name] = rep
    header = ["report", "criterion", "weight", "p", "d", "param", "ratio", "verdict"]
    rows = []
    for key, rep in reports.items():
        for param, ratio in rep["grid"]:
            rows.append([key or rep["criterion"], rep["criterion"], rep["weight"], rep["p"], rep["d"], param, ratio, rep["verdict"]])
    return header, rows


def render(result, fmt: str) -> str:
    result = _clean(result)
    if fmt == "json":
        return json.dumps(result, sort_keys=True, indent=2) + "\n"
    header, rows = _rows_for_csv(result)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute ``cfg``; returns ``(exit_status, rendered_output)``."""
    try:
        result = HANDLERS[cfg.subcommand](cfg)
    except QuadratureError as exc:
        return 3, f"numerical failure: {exc}\n"
    except ValueError as exc:
        return 2, f"invalid input: {exc}\n"
    text = render(result, cfg.get("format"))
    out = cfg.get("output")
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    return 0, text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cesaro-growth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="flat key=value file; flags override it")
        for key in OPTIONS:
            sp.add_argument(f"--{key.replace('_', '-')}", dest=key, default=None)
    return parser


def config_from_args(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    values = {}
    if ns.config:
        try:
            with open(ns.config) as fh:
                base = RunConfig.from_text(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if base.subcommand != ns.subcommand:
            raise ConfigError(f"config is for {base.subcommand}, not {ns.subcommand}")
        values.update(base.options)
    values.update({k: getattr(ns, k) for k in OPTIONS if getattr(ns, k) is not None})
    return RunConfig(ns.subcommand, values)


def main(argv=None) -> int:
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    status, text = run(cfg)
    (sys.stdout if status == 0 else sys.stderr).write(text if status or not cfg.get("output") else "")
    return status


if __name__ == "__main__":
    sys.exit(main())
