"""Command-line driver producing JSON reports.

Every command turns into a ``RunConfig`` (from flags or ``--config file.json``)
and ``run`` maps a config to a ``Report``.  Reports go to stdout (or
``--output``) as sorted-key JSON; a one-line summary goes to stderr.

Exit codes: 0 no refutation, 1 at least one refutation, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from . import construct, intcone, intervals, ratcone, supernat
from .embed import MultiplicationMap
from .intervals import Verdict

COMMANDS = ("semigroup", "supernatural", "block", "interval", "gaps", "chain",
            "ertorema", "laleche", "verify-all")
BOUND_KEYS = ("level_bound", "sweep_bound", "sample_count", "work_limit")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    parameters: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    seed: int = 0
    output: str | None = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        for k, v in self.bounds.items():
            if k not in BOUND_KEYS:
                raise UsageError(f"unknown bound {k!r}")
            if v is not None and (not isinstance(v, int) or v <= 0):
                raise UsageError(f"bound {k} must be a positive integer, got {v!r}")
        if not isinstance(self.seed, int):
            raise UsageError("seed must be an integer")

    def echo(self) -> dict:
        return {"command": self.command, "parameters": self.parameters,
                "bounds": self.bounds, "seed": self.seed}


@dataclass
class Report:
    config: RunConfig
    verdicts: list
    result: object = None
    timestamp: str = ""

    @property
    def records(self) -> list:
        return sorted((v.to_record() for v in self.verdicts), key=lambda r: r["claim"])

    @property
    def summary(self) -> dict:
        out = {s: 0 for s in intervals.STATUSES}
        for v in self.verdicts:
            out[v.status] += 1
        return out

    @property
    def exit_code(self) -> int:
        return 1 if self.summary["refuted"] else 0

    def to_json(self) -> dict:
        return {
            "header": {"tool": "rankone", "version": __version__,
                       "config": self.config.echo(), "timestamp": self.timestamp},
            "records": self.records,
            "summary": self.summary,
            "exit_code": self.exit_code,
            "result": self.result,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2, default=str)


# -- parameter helpers ---------------------------------------------------------

def _ints(text) -> list:
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}")


def _rational(text) -> Fraction:
    try:
        return ratcone.as_fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected a rational a/b or an integer, got {text!r}")


def _cone(p: dict, gens_key="gens", cone_key="cone", layered_key="layered"):
    if p.get(gens_key):
        return intcone.IntegerCone(_ints(p[gens_key]))
    for key in (cone_key, layered_key):
        if p.get(key):
            return intcone.parse_cone(p[key])
    raise UsageError("give a cone with --gens, --cone or --layered")


def _need(p: dict, *keys):
    missing = [k for k in keys if p.get(k) is None]
    if missing:
        raise UsageError("missing parameter(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))


def _proved(claim, note="", witness=None):
    return Verdict(claim, "proved", witness=witness, note=note)


# -- commands --------------------------------------------------------------------

def _semigroup(cfg: RunConfig):
    p = cfg.parameters
    cone = _cone(p)
    action = p.get("action") or "analyze"
    if action == "analyze":
        prof = intcone.analyze(cone)
        return [_proved(f"analyze {cone}", f"conductor {prof.conductor}")], prof.to_json()
    if action == "member":
        _need(p, "value")
        x = int(p["value"])
        got = cone.contains(x)
        return [_proved(f"{x} {'in' if got else 'not in'} {cone}")], {"member": got}
    if action == "embed":
        _need(p, "multiplier", "target")
        tgt = intcone.parse_cone(p["target"])
        res = MultiplicationMap(int(p["multiplier"]), cone, tgt).check()
        claim = f"x{p['multiplier']}: {cone} -> {tgt} order-embedding"
        v = Verdict(claim, "proved" if res.embeds else "refuted", bound=res.bound,
                    witness=res.witness)
        return [v], {"embeds": res.embeds, "witness": res.witness, "bound": res.bound}
    if action == "intersect":
        others = [intcone.parse_cone(c) for c in (p.get("with") or [])]
        L = int(p.get("L") or 1)
        S = intcone.intersect_scale([cone] + others, L)
        prof = intcone.analyze(S)
        return [_proved(f"intersect_scale L={L}")], prof.to_json()
    raise UsageError(f"unknown semigroup action {action!r}")


def _supernatural(cfg: RunConfig):
    p = cfg.parameters
    action = p.get("action") or "show"
    S = supernat.Supernatural.parse
    try:
        if action == "show":
            _need(p, "a")
            return [_proved("parse")], {"value": str(S(p["a"]))}
        if action == "contains":
            _need(p, "a", "x")
            n, x = S(p["a"]), _rational(p["x"])
            got = supernat.subgroup_contains(n, x)
            return [_proved(f"{x} {'in' if got else 'not in'} Z_{n}")], {"member": got}
        _need(p, "a", "b")
        a, b = S(p["a"]), S(p["b"])
    except ValueError as exc:
        raise UsageError(str(exc))
    if action == "mul":
        return [_proved("mul")], {"value": str(supernat.mul(a, b))}
    if action == "divides":
        return [_proved("divides")], {"divides": supernat.divides(a, b)}
    if action == "coprime":
        return [_proved("coprime")], {"coprime": supernat.coprime(a, b)}
    raise UsageError(f"unknown supernatural action {action!r}")


def _block_from(p: dict):
    if p.get("block"):
        q, pp, s, r = _ints(p["block"])
    else:
        _need(p, "q", "p", "s", "r")
        q, pp, s, r = (int(p[k]) for k in ("q", "p", "s", "r"))
    return ratcone.new_block(q, pp, s, r)


def _read_samples(path: str) -> list:
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = text.split()
    return [_rational(x) for x in data]


def _block(cfg: RunConfig):
    p = cfg.parameters
    b = _block_from(p)
    action = p.get("action") or "member"
    lb = cfg.bounds.get("level_bound") or 10
    if action == "member":
        _need(p, "value")
        x = _rational(p["value"])
        direct, ladder = b.contains_direct(x), b.contains_ladder(x)
        claim = f"{x} {'in' if direct else 'not in'} M"
        if direct != ladder:
            v = Verdict(claim, "refuted", witness=x, note="direct and ladder procedures disagree")
        else:
            v = _proved(claim, note=f"decomposition {b.decompose(x)}" if direct else "")
        return [v], {"member": direct, "ladder": ladder}
    if action == "not-multiple":
        _need(p, "t")
        v = ratcone.check_not_multiple(b, int(p["t"]), int(p.get("level_bound") or lb))
        return [v], None
    if action == "covers":
        _need(p, "samples")
        v = ratcone.check_covers(b, _read_samples(p["samples"]))
        return [v], {"samples": [list(map(str, d)) for d in v.details]}
    raise UsageError(f"unknown block action {action!r}")


def _interval(cfg: RunConfig):
    p = cfg.parameters
    _need(p, "block")
    b = _block_from({"block": p["block"]})
    if (p.get("kind") or "D") != "D":
        raise UsageError("only --kind D is available")
    D = ratcone.interval_D(b)
    action = p.get("action") or "probe"
    if action == "probe":
        _need(p, "threshold")
        v = intervals.state_sup_probe(D, _rational(p.get("u") or 1), _rational(p["threshold"]),
                                      int(p.get("bound") or 1000))
    elif action == "contains":
        _need(p, "value")
        x = _rational(p["value"])
        v = intervals.contains_up_to(D, x, int(p.get("bound") or 10))
    elif action == "soft":
        v = intervals.is_soft(D, int(p.get("bound") or 6))
    else:
        raise UsageError(f"unknown interval action {action!r}")
    return [v], {"start": D.start}


def _gaps(cfg: RunConfig):
    p = cfg.parameters
    _need(p, "a", "H")
    H = intcone.parse_cone(p["H"])
    G, pcd, gp = construct.extend_component(H, int(p["a"]))
    vs = [_proved(f"l_{i} = {l} not in G") if not G.contains(l)
          else Verdict(f"l_{i} = {l} not in G", "refuted", witness=l)
          for i, l in enumerate(gp.L)]
    ok = G.certify_conductor(gp.N_G)
    vs.append(Verdict(f"N_G = {gp.N_G}", "proved" if ok else "refuted", witness=None if ok else gp.N_G))
    return vs, {"G": str(G), "p": pcd.p, "c": pcd.c, "d": pcd.d, "L": list(gp.L), "N_G": gp.N_G}


def _chain(cfg: RunConfig):
    p = cfg.parameters
    _need(p, "H1", "A", "depth")
    H1 = intcone.parse_cone(p["H1"])
    if isinstance(H1, intcone.LayeredCone):
        H1 = H1.flatten()
    try:
        rep = construct.build_chain(H1, _ints(p["A"]), int(p["depth"]),
                                    work_limit=cfg.bounds.get("work_limit"))
    except construct.BudgetExceeded as exc:
        return [Verdict("chain", "skipped", note=f"budget: {exc}")], None
    result = {"stages": [{"i": s.index, "cone": str(s.cone), "N": s.N, "y": s.y, "a": s.a,
                          "pcd": None if s.pcd is None else [s.pcd.p, s.pcd.c, s.pcd.d]}
                         for s in rep.stages],
              "states": [str(s) for s in rep.states]}
    return rep.verdicts, result


def _ertorema(cfg: RunConfig):
    p = cfg.parameters
    _need(p, "J", "diagrams", "size")
    rep = construct.build_ertorema(_ints(p["J"]), int(p["diagrams"]), int(p["size"]),
                                   level_bound=cfg.bounds.get("level_bound") or 10,
                                   samples=cfg.bounds.get("sample_count") or 20, seed=cfg.seed)
    return rep.verdicts, rep.data


def _laleche(cfg: RunConfig):
    p = cfg.parameters
    _need(p, "L", "J", "size")
    try:
        rep = construct.build_laleche(_ints(p["L"]), _ints(p["J"]), int(p["size"]),
                                      level_bound=cfg.bounds.get("level_bound") or 10,
                                      samples=cfg.bounds.get("sample_count") or 20,
                                      seed=cfg.seed, work_limit=cfg.bounds.get("work_limit"))
    except construct.BudgetExceeded as exc:
        return [Verdict("laleche", "skipped", note=f"budget: {exc}")], None
    return rep.verdicts, rep.data


def _verify_all(cfg: RunConfig):
    from .suite import run_suite
    vs = run_suite(cfg.seed, cfg.bounds, inject_fault=bool(cfg.parameters.get("inject_fault")))
    return vs, None


_DISPATCH = {"semigroup": _semigroup, "supernatural": _supernatural, "block": _block,
             "interval": _interval, "gaps": _gaps, "chain": _chain, "ertorema": _ertorema,
             "laleche": _laleche, "verify-all": _verify_all}


def run(config: RunConfig) -> Report:
    """Dispatch ``config``; module precondition failures surface as ``UsageError``."""
    config.validate()
    try:
        verdicts, result = _DISPATCH[config.command](config)
    except UsageError:
        raise
    except (ValueError, TypeError, IndexError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return Report(config, list(verdicts), result, stamp)


def verify_all(config: RunConfig) -> Report:
    config.command = "verify-all"
    return run(config)


# -- argument parsing ----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """No prefix matching: ``--s`` must never be read as ``--seed``."""

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)


def _parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--output", default=argparse.SUPPRESS)
    for k in BOUND_KEYS:
        common.add_argument("--" + k.replace("_", "-"), dest=k, type=int, default=argparse.SUPPRESS)

    ap = _Parser(prog="rankone", parents=[common],
                                 description="Build and check rank-one ordered groups and their cones.")
    ap.add_argument("--config", help="JSON file with command, parameters, bounds, seed, output")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    sg = sub.add_parser("semigroup", parents=[common], help="integer cones")
    sg.add_argument("--gens")
    sg.add_argument("--cone")
    sg.add_argument("--layered")
    sga = sg.add_subparsers(dest="action", parser_class=_Parser)
    sga.add_parser("analyze", parents=[common])
    m = sga.add_parser("member", parents=[common])
    m.add_argument("--value", required=True)
    m = sga.add_parser("embed", parents=[common])
    m.add_argument("--multiplier", required=True, type=int)
    m.add_argument("--target", required=True)
    m = sga.add_parser("intersect", parents=[common])
    m.add_argument("--with", action="append", default=[])
    m.add_argument("--L", type=int, default=1)

    sn = sub.add_parser("supernatural", parents=[common], help="generalized integers")
    sna = sn.add_subparsers(dest="action", parser_class=_Parser)
    m = sna.add_parser("show", parents=[common])
    m.add_argument("--a", required=True)
    for name in ("mul", "divides", "coprime"):
        m = sna.add_parser(name, parents=[common])
        m.add_argument("--a", required=True)
        m.add_argument("--b", required=True)
    m = sna.add_parser("contains", parents=[common])
    m.add_argument("--a", required=True, help="the supernatural n")
    m.add_argument("--x", required=True)

    bl = sub.add_parser("block", parents=[common], help="rational block monoids")
    for k in ("q", "p", "s", "r"):
        bl.add_argument("--" + k, type=int, required=True)
    bla = bl.add_subparsers(dest="action", parser_class=_Parser)
    m = bla.add_parser("member", parents=[common])
    m.add_argument("--value", required=True)
    m = bla.add_parser("not-multiple", parents=[common])
    m.add_argument("--t", type=int, required=True)
    m = bla.add_parser("covers", parents=[common])
    m.add_argument("--samples", required=True)

    iv = sub.add_parser("interval", parents=[common], help="intervals of a block")
    iv.add_argument("--block", required=True, help="q,p,s,r")
    iv.add_argument("--kind", default="D")
    iva = iv.add_subparsers(dest="action", parser_class=_Parser)
    m = iva.add_parser("probe", parents=[common])
    m.add_argument("--threshold", required=True)
    m.add_argument("--u", default="1")
    m.add_argument("--bound", type=int)
    m = iva.add_parser("contains", parents=[common])
    m.add_argument("--value", required=True)
    m.add_argument("--bound", type=int)
    m = iva.add_parser("soft", parents=[common])
    m.add_argument("--bound", type=int)

    g = sub.add_parser("gaps", parents=[common], help="extend a cone and list its gap certificate")
    g.add_argument("--a", type=int, required=True)
    g.add_argument("--H", required=True)

    c = sub.add_parser("chain", parents=[common], help="chain of extensions")
    c.add_argument("--H1", required=True)
    c.add_argument("--A", required=True)
    c.add_argument("--depth", type=int, required=True)

    e = sub.add_parser("ertorema", parents=[common], help="successive ladder grids")
    e.add_argument("--J", required=True)
    e.add_argument("--diagrams", type=int, required=True)
    e.add_argument("--size", type=int, required=True)

    ll = sub.add_parser("laleche", parents=[common], help="combined grid")
    ll.add_argument("--L", required=True)
    ll.add_argument("--J", required=True)
    ll.add_argument("--size", type=int, required=True)

    va = sub.add_parser("verify-all", parents=[common], help="run the acceptance suite")
    va.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return ap


def config_from_args(argv) -> RunConfig:
    ns = vars(_parser().parse_args(argv))
    cfg_path = ns.pop("config", None)
    if cfg_path:
        with open(cfg_path) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise UsageError("config file must hold a JSON object")
        base = RunConfig(raw.get("command") or ns.get("command"), dict(raw.get("parameters") or {}),
                         dict(raw.get("bounds") or {}), raw.get("seed", 0), raw.get("output"))
    else:
        base = RunConfig(ns.get("command"))
    command = ns.pop("command", None)
    if command and not cfg_path:
        base.command = command
    for k in BOUND_KEYS:
        if k in ns:
            base.bounds[k] = ns.pop(k)
    if "seed" in ns:
        base.seed = ns.pop("seed")
    if "output" in ns:
        base.output = ns.pop("output")
    if base.command is None:
        raise UsageError("no command given")
    for k, v in ns.items():
        if v is not None and v != []:
            base.parameters[k] = v
        elif k not in base.parameters:
            base.parameters[k] = v
    if base.command == "block" and base.parameters.get("level_bound") is None:
        base.parameters.pop("level_bound", None)
    return base


def main(argv=None) -> int:
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
        rep = run(cfg)
    except SystemExit as exc:  # argparse already printed its message
        return 2 if exc.code else 0
    except (UsageError, OSError, json.JSONDecodeError) as exc:
        print(f"rankone: error: {exc}", file=sys.stderr)
        return 2
    text = rep.dumps()
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    s = rep.summary
    print(f"rankone {cfg.command}: {s['proved']} proved, {s['verified_to_bound']} verified to bound, "
          f"{s['refuted']} refuted, {s['skipped']} skipped", file=sys.stderr)
    for v in rep.verdicts:
        if v.status == "skipped":
            print(f"warning: skipped {v.claim}: {v.note}", file=sys.stderr)
    return rep.exit_code
