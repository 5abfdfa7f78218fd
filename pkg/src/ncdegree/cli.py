"""``ncdegree`` command line tool.

Subcommands
-----------
table1      minimal quadrature variances b'_r for r = 1..max_r (CSV or JSON)
pure-bound  b_r of a pure state, optionally swept over beta or xi
certify     compare a measured value against a cached or fresh bound family
bound       one optimized bound for an observable spec (JSON)

Exit codes: 0 success, 2 bad input or spec, 3 optimizer failure,
4 unbounded direction.
"""
import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .algebra import NormalOrderedPolynomial
from .bounds import OptimizerConfig, optimize_bound, pure_state_bound, with_overrides
from .errors import (
    ConditioningError,
    InvalidInputError,
    NcDegreeError,
    NestingError,
    OptimizerError,
    UnboundedDirectionError,
)
from .specio import (
    canonical_json,
    content_hash,
    load_spec,
    observable_to_spec,
    parse_observable,
    parse_state,
)
from .states import CompassSpec, SqueezedVacuum, make_compass
from .witness import Witness, certify, check_nesting, squeezing_db

SCHEMA_VERSION = 1
EXIT_OK, EXIT_SPEC, EXIT_OPTIMIZER, EXIT_UNBOUNDED = 0, 2, 3, 4
TABLE1_MAX_R = 9

logger = logging.getLogger("ncdegree.cli")


class PartialResultError(NcDegreeError):
    """A family computation stopped early; ``rows`` holds what was finished."""

    def __init__(self, rows, cause):
        super().__init__(str(cause))
        self.rows = rows
        self.cause = cause


def _fmt_bound(b):
    return f"{b:.6f}"


def _fmt_db(b):
    return f"{squeezing_db(b):.2f}" if b > 0 else ""


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _json_text(data):
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _config_from_args(args, base=None):
    base = base or OptimizerConfig()
    line = getattr(args, "line_init", None)
    return with_overrides(base, seed=args.seed, n_starts=args.starts, workers=args.workers,
                          heuristic_line_init=line)


def _quadrature_family(max_r, config):
    """Bounds b'_1..b'_max_r of x^2; stops at the first optimizer failure."""
    obs = NormalOrderedPolynomial.quadrature_square()
    results = []
    for r in range(1, max_r + 1):
        try:
            results.append(optimize_bound(obs, r, 1, "inf", config))
        except (OptimizerError, ConditioningError) as exc:
            raise PartialResultError(results, exc) from exc
        logger.info("r=%d b'=%.8f", r, results[-1].bound)
    return results


# table1 ------------------------------------------------------------------

def _table1_output(results, seed, fmt, error=None):
    if fmt == "json":
        rows = [{"r": res.r, "bound": float(_fmt_bound(res.bound)),
                 "squeezing_db": float(_fmt_db(res.bound)) if res.bound > 0 else None,
                 "stationarity": res.stationarity, "starts_converged": res.starts_converged,
                 "n_starts": res.n_starts}
                for res in results]
        data = {"schema_version": SCHEMA_VERSION, "command": "table1", "seed": seed, "rows": rows}
        if error is not None:
            data["error"] = error
        return _json_text(data)
    rows = [[res.r, _fmt_bound(res.bound), _fmt_db(res.bound), seed, "ok"] for res in results]
    if error is not None:
        rows.append([error["r"], "", "", seed, f"error: {error['message']}"])
    return _csv_text(["r", "bound", "squeezing_db", "seed", "status"], rows)


def cmd_table1(args):
    if not 1 <= args.max_r <= TABLE1_MAX_R:
        raise InvalidInputError(f"--max-r must lie in 1..{TABLE1_MAX_R}")
    config = _config_from_args(args, OptimizerConfig(heuristic_line_init=True))
    try:
        results = _quadrature_family(args.max_r, config)
    except PartialResultError as exc:
        error = {"r": len(exc.rows) + 1, "message": str(exc.cause)}
        check_nesting([res.bound for res in exc.rows], "inf")
        _emit(_table1_output(exc.rows, config.seed, args.format, error), args.out)
        raise exc.cause
    check_nesting([res.bound for res in results], "inf")
    _emit(_table1_output(results, config.seed, args.format), args.out)
    return EXIT_OK


# pure-bound --------------------------------------------------------------

def _sweep_state(family, value, size):
    if family == "cat":
        return make_compass(CompassSpec(2, value))
    if family == "compass":
        return make_compass(CompassSpec(size, value))
    return SqueezedVacuum(value)


def cmd_pure_bound(args):
    config = _config_from_args(args)
    r_list = sorted(set(args.r or [1]))
    if r_list[0] < 1:
        raise InvalidInputError("--r values must be positive")
    if args.spec is not None:
        if args.family is not None:
            raise InvalidInputError("give either --spec or --family, not both")
        states = [(None, parse_state(load_spec(args.spec)))]
    elif args.family is not None:
        if not args.grid:
            raise InvalidInputError("--family needs --grid values")
        states = [(v, _sweep_state(args.family, v, args.compass_size)) for v in args.grid]
    else:
        raise InvalidInputError("pure-bound needs --spec or --family")

    records = []
    for value, state in states:
        family = []
        for r in r_list:
            res = pure_state_bound(state, r, config)
            family.append(res.bound)
            records.append((value, r, res.bound))
        check_nesting(family, "sup")

    param = {"cat": "beta", "compass": "beta", "squeezed": "xi"}.get(args.family, "value")
    if args.format == "json":
        data = {"schema_version": SCHEMA_VERSION, "command": "pure-bound", "seed": config.seed,
                "family": args.family, "parameter": param,
                "rows": [{param: v, "r": r, "bound": float(_fmt_bound(b))} for v, r, b in records]}
        _emit(_json_text(data), args.out)
    else:
        rows = [["" if v is None else repr(v), r, _fmt_bound(b), config.seed] for v, r, b in records]
        _emit(_csv_text([param, "r", "bound", "seed"], rows), args.out)
    return EXIT_OK


# certify -----------------------------------------------------------------

def cache_dir():
    root = os.environ.get("NCDEGREE_CACHE_DIR")
    if root:
        return Path(root)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "ncdegree"


def _cache_path(obs_spec, r, direction, config):
    key = content_hash(obs_spec)
    cfg_key = content_hash(config.to_dict())
    return cache_dir() / f"{key}-{direction}-r{r}-{cfg_key}.json"


def _cached_bound(obs, obs_spec, r, direction, config, recompute):
    path = _cache_path(obs_spec, r, direction, config)
    if path.exists():
        try:
            entry = json.loads(path.read_text())
            if entry.get("observable") == obs_spec and entry.get("r") == r:
                return float(entry["bound"])
        except (OSError, ValueError, KeyError, TypeError):
            logger.warning("ignoring unreadable cache entry %s", path)
    if not recompute:
        raise InvalidInputError(f"no cached bound for r={r} and --no-recompute was given ({path})")
    res = optimize_bound(obs, r, None, direction, config)
    path.parent.mkdir(parents=True, exist_ok=True)
    entry = {"observable": obs_spec, "r": r, "direction": direction, "bound": res.bound,
             "config": config.to_dict(), "schema_version": SCHEMA_VERSION}
    tmp = path.with_suffix(".tmp")
    tmp.write_text(canonical_json(entry))
    tmp.replace(path)
    return res.bound


def cmd_certify(args):
    if (args.db is None) == (args.value is None):
        raise InvalidInputError("certify needs exactly one of --db or --value")
    if args.spec is not None:
        obs = parse_observable(load_spec(args.spec))
    else:
        obs = NormalOrderedPolynomial.quadrature_square()
    is_quadrature = obs == NormalOrderedPolynomial.quadrature_square()
    if args.db is not None:
        if not is_quadrature:
            raise InvalidInputError("--db only makes sense for the quadrature variance observable")
        measured = 10.0 ** (-args.db / 10.0)
    else:
        measured = args.value
    direction = args.direction or "inf"
    line = direction == "inf" and obs.modes == 1
    config = _config_from_args(args, OptimizerConfig(heuristic_line_init=line))
    obs_spec = observable_to_spec(obs)

    witnesses = []
    for r in range(1, args.max_r + 1):
        bound = _cached_bound(obs, obs_spec, r, direction, config, not args.no_recompute)
        witnesses.append(Witness(obs, r, obs.modes, direction, bound))
    result = certify(witnesses, measured, args.standard_error)

    bounds = [{"r": w.r, "bound": float(_fmt_bound(w.bound)),
               "db": float(_fmt_db(w.bound)) if is_quadrature and w.bound > 0 else None}
              for w in witnesses]
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "certify",
        "observable": obs_spec,
        "direction": direction,
        "bounds": bounds,
        "measured": measured,
        "measured_db": args.db,
        "violated_r": list(result.violated_r),
        "statement": result.certified_statement,
        "margin": result.margin,
        "standard_error": result.standard_error,
        "seed": config.seed,
    }
    _emit(_json_text(report), args.out)
    return EXIT_OK


# bound -------------------------------------------------------------------

def cmd_bound(args):
    if args.format == "csv":
        raise InvalidInputError("bound only writes JSON")
    if args.spec is None:
        raise InvalidInputError("bound needs --spec")
    spec = load_spec(args.spec)
    obs = parse_observable(spec)
    r = args.r[0] if args.r else 1
    if args.r and len(args.r) > 1:
        raise InvalidInputError("bound takes a single --r")
    direction = args.direction or "inf"
    config = _config_from_args(args)
    res = optimize_bound(obs, r, args.modes, direction, config)
    data = {"schema_version": SCHEMA_VERSION, "command": "bound", "observable": spec,
            "config": config.to_dict(), "result": res.to_dict()}
    _emit(_json_text(data), args.out)
    return EXIT_OK


# parser ------------------------------------------------------------------

def _common(p):
    p.add_argument("--seed", type=int, default=None, help="random seed for the start points (default 0)")
    p.add_argument("--starts", type=int, default=None, help="number of optimizer starts")
    p.add_argument("--workers", type=int, default=None, help="threads running starts in parallel")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="ncdegree", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table1", help="minimal quadrature variance for r = 1..max_r")
    p.add_argument("--max-r", type=int, default=5)
    p.add_argument("--no-line-init", dest="line_init", action="store_false", default=None,
                   help="use only unconstrained random starts")
    _common(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("pure-bound", help="maximal overlap of a pure state with r-term superpositions")
    p.add_argument("--spec", default=None, help="state spec JSON")
    p.add_argument("--family", choices=("cat", "compass", "squeezed"), default=None)
    p.add_argument("--grid", type=float, nargs="+", default=None, help="beta or xi values")
    p.add_argument("--compass-size", type=int, default=4, help="R for --family compass")
    p.add_argument("--r", type=int, nargs="+", default=None)
    _common(p)
    p.set_defaults(func=cmd_pure_bound)

    p = sub.add_parser("certify", help="certify a degree from a measured expectation value")
    p.add_argument("--spec", default=None, help="observable spec JSON (default: x^2)")
    p.add_argument("--db", type=float, default=None, help="measured squeezing in dB")
    p.add_argument("--value", type=float, default=None, help="measured expectation value")
    p.add_argument("--standard-error", type=float, default=None)
    p.add_argument("--max-r", type=int, default=TABLE1_MAX_R)
    p.add_argument("--direction", choices=("inf", "sup"), default=None)
    p.add_argument("--no-recompute", action="store_true", help="fail instead of optimizing missing bounds")
    _common(p)
    p.set_defaults(func=cmd_certify, format="json")

    p = sub.add_parser("bound", help="optimize one bound for an observable spec")
    p.add_argument("--spec", default=None, help="observable spec JSON")
    p.add_argument("--r", type=int, nargs="+", default=None)
    p.add_argument("--direction", choices=("inf", "sup"), default=None)
    p.add_argument("--modes", type=int, default=None)
    _common(p)
    p.set_defaults(func=cmd_bound, format="json")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UnboundedDirectionError as exc:
        print(f"error: unbounded direction: {exc}", file=sys.stderr)
        return EXIT_UNBOUNDED
    except (OptimizerError, ConditioningError, NestingError) as exc:
        print(f"error: optimizer failure: {exc}", file=sys.stderr)
        return EXIT_OPTIMIZER
    except (InvalidInputError, NcDegreeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC


if __name__ == "__main__":
    sys.exit(main())
