"""``vconv`` command-line driver.

Exit status: 0 holds, 1 fails, 2 inconclusive, 3 usage/config/IO error.
Settings resolve as flags > ``--config`` JSON > built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .closure import CoverPiece, patch_check
from .convergence import abel_series, classify, interchange_check, normal_series_test, v_cauchy_sequence
from .corpus import ABEL, FUNCTION, SERIES, corpus_families, lookup
from .errors import ConfigError, VConvError
from .options import Options
from .report import emit_report, to_json
from .space import Region, SemidistanceFamily, Space, load_domain, load_family, partial_sums
from .verdict import Verdict
from .vmetric import Entourage, entourage_test

USAGE_ERROR = 3
COMMANDS = ("vdist", "classify", "cauchy", "series", "abel", "interchange", "patch", "corpus")
DEFAULT_FAMILY = {
    "vdist": "power-sequence",
    "classify": "power-sequence",
    "cauchy": "power-sequence",
    "series": "damped-power-series",
    "abel": "dirichlet-kernel",
    "interchange": "moving-bump",
}
A_SEQUENCES = {"1/n": lambda n: 1.0 / n, "1-1/n": lambda n: 1.0 - 1.0 / n}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    params: dict = field(default_factory=dict)
    probes: list | None = None
    eps: float = 1e-2
    member: int = 0
    space: dict | None = None
    options: Options = field(default_factory=Options)
    extra: dict = field(default_factory=dict)
    out: str | None = None
    csv: str | None = None
    svg: str | None = None


def _parse_param(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    key, value = text.split("=", 1)
    return key.strip(), value.strip()


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vconv", description="V-convergence diagnostics for function sequences.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--family", help="corpus family name")
    common.add_argument("--param", action="append", type=_parse_param, default=None, metavar="KEY=VALUE",
                        help="family parameter (repeatable)")
    common.add_argument("--horizon", type=int, help="sequence horizon N_max")
    common.add_argument("--probes", type=float, nargs="+", help="probe points (1-d domains)")
    common.add_argument("--eps", type=float, help="tolerance epsilon")
    common.add_argument("--member", type=int, help="semidistance member index")
    common.add_argument("--k-max", type=int, dest="k_max", help="largest scale index")
    common.add_argument("--min-tail", type=int, dest="min_tail", help="tail length for holds/fails")
    common.add_argument("--out", help="write the JSON report here (default: stdout)")
    common.add_argument("--csv", help="also write a CSV table")
    common.add_argument("--svg", help="also write an SVG plot")

    p = sub.add_parser("vdist", parents=[common], help="V-semidistance between two functions")
    p.add_argument("--n", type=int, help="sequence index of the first function")
    p.add_argument("--against", help="second function: corpus family (default: the family's limit)")
    p.add_argument("--against-n", type=int, dest="against_n", help="index into --against when it is a sequence")
    sub.add_parser("classify", parents=[common], help="classify convergence modes")
    p = sub.add_parser("cauchy", parents=[common], help="sequence Cauchy criterion at one point")
    p.add_argument("--point", type=float, help="probe point a (default: first probe)")
    sub.add_parser("series", parents=[common], help="normal-convergence rule for a series")
    sub.add_parser("abel", parents=[common], help="Abel rule for a weighted series")
    p = sub.add_parser("interchange", parents=[common], help="limit interchange along a_n")
    p.add_argument("--a-seq", dest="a_seq", choices=sorted(A_SEQUENCES), help="sequence a_n")
    p.add_argument("--n-terms", type=int, dest="n_terms", help="number of a_n terms")
    p = sub.add_parser("patch", parents=[common], help="patch local approximants over a cover")
    p.add_argument("--cover", help="cover JSON (target and ordered pieces)")
    sub.add_parser("corpus", parents=[common], help="list corpus families")
    return parser


def resolve(args: argparse.Namespace) -> RunConfig:
    doc = {}
    if args.config:
        doc = json.loads(Path(args.config).read_text())
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
    cfg = RunConfig(args.command)
    cfg.family = args.family or doc.get("family") or DEFAULT_FAMILY.get(args.command)
    params = dict(doc.get("params", {}))
    if args.param:
        params.update(dict(args.param))
    if args.horizon is not None:
        params["horizon"] = args.horizon
    elif "horizon" in doc:
        params["horizon"] = doc["horizon"]
    cfg.params = params
    cfg.probes = args.probes if args.probes is not None else doc.get("probes")
    cfg.eps = args.eps if args.eps is not None else float(doc.get("eps", 1e-2))
    cfg.member = args.member if args.member is not None else int(doc.get("member", 0))
    cfg.space = doc.get("space")
    opts = dict(doc.get("options", {}))
    for name in ("k_max", "min_tail"):
        if getattr(args, name) is not None:
            opts[name] = getattr(args, name)
    cfg.options = Options.from_dict(opts)
    for name in ("n", "against", "against_n", "point", "a_seq", "n_terms", "cover"):
        value = getattr(args, name, None)
        cfg.extra[name] = value if value is not None else doc.get(name)
    cfg.out = args.out or doc.get("out")
    cfg.csv = args.csv or doc.get("csv")
    cfg.svg = args.svg or doc.get("svg")
    if not cfg.eps > 0 or not math.isfinite(cfg.eps):
        raise ConfigError("eps must be a positive number")
    return cfg


def _space(cfg: RunConfig, entry) -> Space:
    if cfg.space:
        domain = load_domain(cfg.space)
        family = load_family(cfg.space) if "members" in cfg.space or "m" in cfg.space else SemidistanceFamily()
        return Space(domain, family)
    return Space(entry.domain_spec(**cfg.params))


def _probes(cfg: RunConfig, entry):
    return cfg.probes if cfg.probes is not None else list(entry.probes)


def _target(name: str, params: dict, n: int | None):
    entry = lookup(name)
    if entry.kind == FUNCTION:
        return entry.function(**params)
    seq = entry.sequence(**params)
    return seq[seq.start if n is None else n]


def run_vdist(cfg: RunConfig):
    entry = lookup(cfg.family)
    space = _space(cfg, entry)
    f = _target(cfg.family, cfg.params, cfg.extra["n"])
    if cfg.extra["against"]:
        g = _target(cfg.extra["against"], {}, cfg.extra["against_n"])
    else:
        g = entry.limit_fn(**cfg.params)
        if g is None:
            raise ConfigError(f"{cfg.family} has no closed-form limit; pass --against")
    return entourage_test(space, f, g, Entourage(cfg.member, cfg.eps), _probes(cfg, entry), cfg.options)


def _sequence_entry(cfg: RunConfig, kinds):
    entry = lookup(cfg.family)
    if entry.kind not in kinds:
        raise ConfigError(f"{cfg.family} is a {entry.kind} entry; this command needs {' or '.join(kinds)}")
    return entry


def run_classify(cfg: RunConfig):
    entry = _sequence_entry(cfg, ("sequence",))
    limit = entry.limit_fn(**cfg.params)
    return classify(_space(cfg, entry), entry.sequence(**cfg.params), limit, _probes(cfg, entry), cfg.eps,
                    cfg.member, cfg.options)


def run_cauchy(cfg: RunConfig):
    entry = _sequence_entry(cfg, ("sequence", SERIES))
    seq = entry.sequence(**cfg.params)
    if entry.kind == SERIES:
        seq = partial_sums(seq)
    a = cfg.extra["point"]
    if a is None:
        probes = _probes(cfg, entry)
        if not probes:
            raise ConfigError("pass --point")
        a = probes[0]
    return v_cauchy_sequence(_space(cfg, entry), seq, [a], cfg.eps, cfg.member, cfg.options)


def run_series(cfg: RunConfig):
    entry = _sequence_entry(cfg, (SERIES,))
    return normal_series_test(_space(cfg, entry), entry.sequence(**cfg.params), _probes(cfg, entry), cfg.eps,
                              None, cfg.options)


def run_abel(cfg: RunConfig):
    entry = _sequence_entry(cfg, (ABEL,))
    return abel_series(_space(cfg, entry), entry.sequence(**cfg.params), entry.weight_sequence(**cfg.params),
                       _probes(cfg, entry), None, cfg.options)


def run_interchange(cfg: RunConfig):
    entry = _sequence_entry(cfg, ("sequence",))
    limit = entry.limit_fn(**cfg.params)
    if limit is None:
        raise ConfigError(f"{cfg.family} has no closed-form limit")
    name = cfg.extra["a_seq"] or ("1-1/n" if cfg.family == "power-sequence" else "1/n")
    if name not in A_SEQUENCES:
        raise ConfigError(f"unknown a_n sequence {name!r}; choose from {sorted(A_SEQUENCES)}")
    count = int(cfg.extra["n_terms"] or 10**6)
    n = np.arange(1, count + 1, dtype=float)
    a_seq = A_SEQUENCES[name](n)
    a = 0.0 if name == "1/n" else 1.0
    return interchange_check(_space(cfg, entry), entry.sequence(**cfg.params), limit, a_seq, a, cfg.probes,
                             cfg.eps, cfg.member, None, cfg.options)


def _default_cover():
    target = lookup("sine-wave").function(freq=2.0)
    pieces = []
    for c in (0.1, 0.3, 0.5, 0.7, 0.9):
        slope, value = 2.0 * math.cos(2.0 * c), math.sin(2.0 * c)
        pieces.append((c, 0.11, lookup("affine").function(slope=slope, intercept=value - slope * c)))
    return target, pieces, 0.05


def _load_cover(path):
    doc = json.loads(Path(path).read_text())
    t = doc["target"]
    target = _target(t["family"], t.get("params", {}), t.get("n"))
    pieces = []
    for piece in doc["pieces"]:
        ap = piece["approximant"]
        pieces.append((float(piece["center"]), float(piece["radius"]),
                       _target(ap["family"], ap.get("params", {}), ap.get("n"))))
    return target, pieces, doc.get("eps")


def run_patch(cfg: RunConfig):
    target, raw, eps = _load_cover(cfg.extra["cover"]) if cfg.extra["cover"] else _default_cover()
    space = Space(load_domain(cfg.space)) if cfg.space else Space(lookup("affine").domain_spec())
    pieces = [CoverPiece(Region(np.array([c]), r, space.domain), g) for c, r, g in raw]
    return patch_check(space, pieces, target, member=cfg.member, eps=eps, opts=cfg.options)


class _Listing:
    kind = "corpus"

    def __init__(self, entries):
        self.entries = entries

    def to_dict(self):
        return {"kind": self.kind, "families": [e.to_dict() for e in self.entries]}

    def csv_rows(self):
        return ["name", "kind", "summary"], [[e.name, e.kind, e.summary] for e in self.entries]


def run_corpus(cfg: RunConfig):
    entries = [lookup(cfg.family)] if cfg.family else corpus_families()
    return _Listing(entries)


RUNNERS = {
    "vdist": run_vdist,
    "classify": run_classify,
    "cauchy": run_cauchy,
    "series": run_series,
    "abel": run_abel,
    "interchange": run_interchange,
    "patch": run_patch,
    "corpus": run_corpus,
}


def exit_code(report) -> int:
    """Trinary verdict of the underlying operation; classify keys on the V mode."""
    if getattr(report, "kind", None) == "classify":
        return report.modes["V"].exit_code
    verdict = getattr(report, "verdict", Verdict.HOLDS)
    return verdict.exit_code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve(args)
        report = RUNNERS[cfg.command](cfg)
        text = to_json(report)
        if cfg.out:
            Path(cfg.out).write_text(text)
        else:
            sys.stdout.write(text)
        if cfg.csv:
            emit_report(report, "csv", cfg.csv)
        if cfg.svg:
            emit_report(report, "svg", cfg.svg)
    except (VConvError, ValueError, TypeError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"vconv: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
