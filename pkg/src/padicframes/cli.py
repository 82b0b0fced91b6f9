"""Command-line front end: ``padicframes {family,bounds,dual,reconstruct,check,battery}``.

JSON reports go to stdout and diagnostics to stderr. Exit codes: 0 success,
1 configuration error, 2 domain error (e.g. a family member outside the test
space), 3 a theorem check reported a violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
from dataclasses import dataclass

import numpy as np

from . import battery, checks
from .battery import Tolerances
from .errors import FamilyNotInSpace, PAdicError, PAdicFrameError
from .frames import (
    TestSpace,
    canonical_dual,
    coefficients,
    frame_bounds,
    reconstruct,
    restrict_to_span,
)
from .functions import function_from_json
from .instances import DEFAULT_SEED, complex_normal
from .padic import Prime
from .wavelets import (
    IndexSet,
    build_family,
    family_from_functions,
    khrennikov_shelkovich_generators,
    kozyrev_generators,
    load_generators,
)

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_VIOLATION = 0, 1, 2, 3

MAX_P = 97
MAX_DIM = 4096
MAX_LEVELS = 7
MAX_DEPTH = 64
TRIAL_DIM_CAP = 16


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    p: int = 2
    system: str = "kozyrev"
    j_min: int = -1
    j_max: int = 0
    m: int = 1
    J: int = 2
    K: int = 1
    seed: int = DEFAULT_SEED
    trials: int = 50
    span_only: bool = False
    project: bool = False
    family_file: str | None = None
    tol: Tolerances = None

    def as_dict(self) -> dict:
        return {
            "p": self.p, "system": self.system, "jRange": [self.j_min, self.j_max], "m": self.m,
            "space": [self.J, self.K], "seed": self.seed, "spanOnly": self.span_only,
            "projected": self.project, "familyFile": self.family_file,
        }


def _int_pair(text, sep, what):
    m = re.fullmatch(rf"\s*(-?\d+)\s*{re.escape(sep)}\s*(-?\d+)\s*", text)
    if not m:
        raise ConfigError(f"bad {what} {text!r}; expected a{sep}b")
    return int(m.group(1)), int(m.group(2))


def _seed(text):
    return int(text, 0)


def config_from_args(args) -> RunConfig:
    try:
        p = Prime(args.p)
    except PAdicError as exc:
        raise ConfigError(str(exc)) from None
    if p > MAX_P:
        raise ConfigError(f"p must be at most {MAX_P}, got {p}")
    j_min, j_max = _int_pair(args.j, "..", "--j range")
    if j_min > j_max:
        raise ConfigError(f"empty --j range {args.j}")
    J, K = _int_pair(args.space, ",", "--space")
    if J + K < 0:
        raise ConfigError("--space needs J + K >= 0")
    if J + K > MAX_LEVELS or p ** (J + K) > MAX_DIM:
        raise ConfigError(f"test space too large: p^(J+K) = {p}^{J + K} (cap {MAX_DIM}, J+K <= {MAX_LEVELS})")
    if args.m < 0:
        raise ConfigError("--m must be >= 0")
    if max(abs(j_min), abs(j_max), abs(J), abs(K)) + args.m > MAX_DEPTH:
        raise ConfigError(f"digit depth exceeds {MAX_DEPTH}")
    if args.trials < 1:
        raise ConfigError("--trials must be positive")
    system = args.system
    if not (system in ("kozyrev",) or re.fullmatch(r"ks:\d+", system) or system.startswith("custom:")):
        raise ConfigError(f"unknown --system {system!r}; use kozyrev, ks:m or custom:FILE")
    tol = Tolerances(bound=args.tol_bound, dual=args.tol_dual, tight=args.tol_tight,
                     reconstruction=args.tol_reconstruction, rank=args.tol_rank)
    return RunConfig(p, system, j_min, j_max, args.m, J, K, args.seed, args.trials,
                     args.span_only, args.project, args.family, tol)


def load_family(cfg: RunConfig):
    if cfg.family_file:
        try:
            with open(cfg.family_file) as fh:
                data = json.load(fh)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read family file: {exc}") from None
        if isinstance(data, dict):
            data = data.get("functions", data.get("family"))
        fams = family_from_functions(function_from_json(item, cfg.p) for item in data)
        return fams
    if cfg.system == "kozyrev":
        gen = kozyrev_generators(cfg.p)
    elif cfg.system.startswith("ks:"):
        ks_m = int(cfg.system[3:])
        if not 1 <= ks_m <= MAX_DEPTH:
            raise ConfigError("ks:m needs 1 <= m")
        gen = khrennikov_shelkovich_generators(cfg.p, ks_m)
    else:
        try:
            gen = load_generators(cfg.system[len("custom:"):])
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"cannot read generator file: {exc}") from None
        if gen.p != cfg.p:
            raise ConfigError(f"generator file is over p={gen.p}, but --p is {cfg.p}")
    return build_family(gen, IndexSet(cfg.j_min, cfg.j_max, cfg.m))


def family_matrix(cfg: RunConfig):
    space = TestSpace(cfg.p, cfg.J, cfg.K)
    family = load_family(cfg)
    return family, space, coefficients(family, space, project=cfg.project)


def _classify(b) -> str:
    if b.A > 0:
        if abs(b.B - 1) <= 1e-9 and abs(b.A - 1) <= 1e-9:
            return "parseval"
        return "tight" if b.tight else "frame"
    return "besselet"


def _header(cmd, cfg, space, family):
    out = {"check": cmd, "p": int(cfg.p), "spaceDims": space.dim, "familySize": len(family)}
    if cfg.project:
        out["projected"] = True
    return out


def write_csv(path, M):
    """Row-major complex matrix dump with ``re,im`` cells."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in M:
            w.writerow([f"{float(z.real)!r},{float(z.imag)!r}" for z in row])


def _emit(obj, fmt):
    if fmt == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        flat = _flatten(obj)
        w.writerow(flat.keys())
        w.writerow(flat.values())
    else:
        sys.stdout.write(json.dumps(obj, indent=2, allow_nan=False) + "\n")


def _flatten(obj, prefix=""):
    out = {}
    for k, v in obj.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = json.dumps(v)
        else:
            out[key] = v
    return out


def cmd_family(cfg, args):
    family, space, F = family_matrix(cfg)
    out = _header("family", cfg, space, family)
    out["manifest"] = family.manifest()
    out["labels"] = [e.label for e in family]
    if args.out:
        write_csv(args.out, F)
        out["matrix"] = args.out
    return out, EXIT_OK


def _system_coords(cfg, F, want_span):
    b = frame_bounds(F, rtol=cfg.tol.rank)
    if want_span or b.rank < F.shape[1]:
        Y, _ = restrict_to_span(F, cfg.tol.rank)
        return Y, True
    return F, False


def cmd_bounds(cfg, args):
    family, space, F = family_matrix(cfg)
    b = frame_bounds(F, on_span_only=cfg.span_only, rtol=cfg.tol.rank)
    out = _header("bounds", cfg, space, family)
    out.update({
        "bounds": {"A": b.A, "B": b.B},
        "spanOnly": cfg.span_only,
        "rank": b.rank,
        "tight": bool(b.is_frame and b.tight),
        "classification": _classify(b),
        "tolerances": cfg.tol.as_dict(),
    })
    if args.out:
        write_csv(args.out, F)
    return out, EXIT_OK


def cmd_dual(cfg, args):
    family, space, F = family_matrix(cfg)
    Y, spanned = _system_coords(cfg, F, cfg.span_only)
    report = checks.check_canonical_dual(Y, cfg.tol.bound, cfg.tol.rank, p=int(cfg.p))
    out = _header("dual", cfg, space, family)
    out.update(report.to_dict())
    out["check"] = "dual"
    out["spanOnly"] = spanned
    out["tolerances"] = cfg.tol.as_dict()
    if args.out:
        write_csv(args.out, canonical_dual(Y, cfg.tol.rank))
    return out, EXIT_OK if report.satisfied else EXIT_VIOLATION


def cmd_reconstruct(cfg, args):
    family, space, F = family_matrix(cfg)
    Y, spanned = _system_coords(cfg, F, cfg.span_only)
    rng = np.random.default_rng(cfg.seed)
    d = Y.shape[1]
    Yd = canonical_dual(Y, cfg.tol.rank)
    worst = 0.0
    rows = []
    for _ in range(args.vectors):
        g = complex_normal(rng, d)
        r1, r2 = reconstruct(g, Y, cfg.tol.rank, dual=Yd)
        err = max(np.linalg.norm(r1 - g), np.linalg.norm(r2 - g)) / np.linalg.norm(g)
        worst = max(worst, float(err))
        rows.append(r1)
    out = _header("reconstruct", cfg, space, family)
    out.update({"spanOnly": spanned, "vectors": args.vectors, "maxRelResidual": worst,
                "satisfied": worst <= cfg.tol.reconstruction, "seed": cfg.seed,
                "tolerances": cfg.tol.as_dict()})
    if args.out:
        write_csv(args.out, np.array(rows))
    return out, EXIT_OK if out["satisfied"] else EXIT_VIOLATION


def _run_theorem(cfg, theorem, system, d):
    reports = battery.run_battery(theorem, seed=cfg.seed, d=d, trials=cfg.trials, tol=cfg.tol,
                                  system=system, p=int(cfg.p))
    return battery.summarize(theorem, reports, p=int(cfg.p), seed=cfg.seed, d=d, tol=cfg.tol)


def _battery_setup(cfg):
    family, space, F = family_matrix(cfg)
    Y, spanned = _system_coords(cfg, F, cfg.span_only)
    d = min(space.dim, TRIAL_DIM_CAP)
    return family, space, Y, spanned, d


def cmd_check(cfg, args):
    family, space, Y, spanned, d = _battery_setup(cfg)
    summary = _run_theorem(cfg, args.theorem, Y, d)
    summary["system"] = {"familySize": len(family), "spaceDims": space.dim, "spanDims": Y.shape[1],
                         "spanOnly": spanned, "projected": cfg.project}
    status = EXIT_OK if summary["violations"] == 0 else EXIT_VIOLATION
    print(f"{args.theorem}: {summary['satisfied']}/{summary['trials']} satisfied", file=sys.stderr)
    return summary, status


def cmd_battery(cfg, args):
    family, space, Y, spanned, d = _battery_setup(cfg)
    results = []
    for theorem in battery.THEOREMS:
        s = _run_theorem(cfg, theorem, Y, d)
        print(f"{theorem}: {s['satisfied']}/{s['trials']} satisfied", file=sys.stderr)
        results.append(s)
    out = {"check": "battery", "p": int(cfg.p), "seed": cfg.seed, "spaceDims": space.dim,
           "familySize": len(family), "config": cfg.as_dict(), "tolerances": cfg.tol.as_dict(),
           "violations": sum(s["violations"] for s in results), "results": results}
    return out, EXIT_OK if out["violations"] == 0 else EXIT_VIOLATION


def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--p", type=int, default=2, help="prime (2..97, default 2)")
    c.add_argument("--system", default="kozyrev", help="kozyrev | ks:m | custom:FILE (default kozyrev)")
    c.add_argument("--family", metavar="FILE", help="JSON list of functions used as the family as-is")
    c.add_argument("--j", default="-1..0", help="dilation range a..b (default -1..0)")
    c.add_argument("--m", type=int, default=1, help="translation depth (default 1)")
    c.add_argument("--space", default="2,1", help="test space J,K (default 2,1)")
    c.add_argument("--span-only", action="store_true", help="bounds on the family's span")
    c.add_argument("--project", action="store_true", help="project members outside the space onto it")
    c.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help="RNG seed (default 0xC0FFEE)")
    c.add_argument("--trials", type=int, default=50, help="randomized instances per check (default 50)")
    c.add_argument("--tol-bound", type=float, default=checks.BOUND_TOL)
    c.add_argument("--tol-dual", type=float, default=checks.DUAL_TOL)
    c.add_argument("--tol-tight", type=float, default=checks.TIGHT_TOL)
    c.add_argument("--tol-reconstruction", type=float, default=checks.RECONSTRUCTION_TOL)
    c.add_argument("--tol-rank", type=float, default=1e-10)
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.add_argument("--out", metavar="FILE", help="CSV dump of the relevant matrix")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="padicframes", description="p-adic multiframelets on finite test spaces")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("family", parents=[common], help="materialize the family and its coordinates")
    sub.add_parser("bounds", parents=[common], help="optimal frame bounds")
    sub.add_parser("dual", parents=[common], help="canonical dual and its bounds")
    rp = sub.add_parser("reconstruct", parents=[common], help="reconstruct random vectors")
    rp.add_argument("--vectors", type=int, default=20)
    cp = sub.add_parser("check", parents=[common], help="randomized check of one theorem")
    cp.add_argument("theorem", choices=battery.THEOREMS)
    sub.add_parser("battery", parents=[common], help="every theorem check")
    return parser


_RANGE_FLAGS = ("--j", "--space")


def _join_negative_values(argv):
    # argparse reads "-1..0" as an option; glue such values to their flag
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _RANGE_FLAGS and i + 1 < len(argv) and re.match(r"-\d", argv[i + 1]):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


COMMANDS = {
    "family": cmd_family,
    "bounds": cmd_bounds,
    "dual": cmd_dual,
    "reconstruct": cmd_reconstruct,
    "check": cmd_check,
    "battery": cmd_battery,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_negative_values(argv))
    try:
        cfg = config_from_args(args)
        out, status = COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FamilyNotInSpace as exc:
        print(f"error: {len(exc.indices)} family members are not in the test space "
              f"(use --project to project them)", file=sys.stderr)
        _emit({"check": args.command, "error": "FamilyNotInSpace", "indices": exc.indices,
               "labels": exc.labels}, args.format)
        return EXIT_DOMAIN
    except PAdicFrameError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    _emit(out, args.format)
    return status


if __name__ == "__main__":
    sys.exit(main())
