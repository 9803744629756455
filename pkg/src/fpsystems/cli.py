"""Command line front end with reproducible, seed-controlled runs.

Every subcommand prints one report, JSON by default, built only from the
arguments and the resolved seed, so identical invocations give
byte-identical output once timestamps are stripped (--no-timestamp).
Exit codes: 0 on success, 1 when a requested check or hypothesis fails,
2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction

from .errors import CapExceededError, DegenerateLineError, DegenerateSystemError
from .linsystem import (
    ClassFilter,
    PointSet,
    SystemSpec,
    enumerate_solutions,
    read_system_file,
    validate,
)
from .sampling import (
    sampling_step_distinct,
    sampling_step_weight,
    verify_containment,
)
from .search import (
    DEFAULT_POINT_CAP,
    AvoidanceProblem,
    exhaustive_max,
    greedy_lower_bound,
    verify_theorem_bound,
)
from .seeds import spawn
from .slicerank import (
    DEFAULT_SUPPORT_CAP,
    Tensor,
    OrderFamily,
    antichain_slice_rank,
    clp_upper_bound,
    corollary_orders,
    gamma,
    monomial_count,
    read_tensor_file,
    verify_polynomial_identity,
)
from .weights import partition_structure, verify_weight_properties, weight

_STRIPPED_KEYS = {"timestamp", "elapsed_s"}


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {f.name: _jsonable(getattr(obj, f.name))
               for f in dataclasses.fields(obj)}
        for name in dir(type(obj)):
            if not name.startswith("_") and isinstance(
                    getattr(type(obj), name, None), property):
                out[name] = _jsonable(getattr(obj, name))
        return out
    if isinstance(obj, Fraction):
        return {"numerator": obj.numerator, "denominator": obj.denominator,
                "value": float(obj)}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, (frozenset, set)):
        return [_jsonable(x) for x in sorted(obj)]
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


def _strip_keys(obj):
    if isinstance(obj, dict):
        return {k: _strip_keys(v) for k, v in obj.items()
                if k not in _STRIPPED_KEYS}
    if isinstance(obj, list):
        return [_strip_keys(x) for x in obj]
    return obj


def _flatten(obj, prefix: str, out: list) -> None:
    if isinstance(obj, dict):
        for key in sorted(obj):
            _flatten(obj[key], f"{prefix}.{key}" if prefix else str(key), out)
    elif isinstance(obj, list):
        out.append((prefix, json.dumps(obj, separators=(",", ":"))))
    else:
        out.append((prefix, obj))


def _render(envelope: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(envelope, indent=2, sort_keys=True) + "\n"
    rows: list = []
    _flatten(envelope, "", rows)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key, value in rows:
            writer.writerow([key, value])
        return buf.getvalue()
    return "".join(f"{key} = {value}\n" for key, value in rows)


def _emit(args, command: str, result, started: float,
          seed: int | None = None) -> None:
    envelope = {"command": command, "result": _jsonable(result)}
    if seed is not None:
        envelope["seed"] = seed
    if not args.no_timestamp:
        envelope["timestamp"] = datetime.now(timezone.utc).isoformat()
        envelope["elapsed_s"] = round(time.perf_counter() - started, 6)
    else:
        envelope = _strip_keys(envelope)
    sys.stdout.write(_render(envelope, args.format))


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError(f"SEED environment variable is not an integer: {env!r}") from exc
    return 0


def _load_system(path: str) -> SystemSpec:
    return read_system_file(path)


def _load_points(args, p) -> PointSet:
    if getattr(args, "points", None):
        points = PointSet.from_file(args.points)
        if points.p != int(p):
            raise ValueError(
                f"point file prime {points.p} differs from system prime {int(p)}")
        return points
    if getattr(args, "n", None):
        return PointSet.full_space(args.n, p,
                                   include_zero=not args.exclude_zero)
    raise ValueError("provide --points FILE or --n N")


def _make_filter(args, k: int) -> ClassFilter:
    mode = args.mode
    if mode == "span-dim":
        if args.r is None:
            raise ValueError("--mode span-dim needs --r")
        return ClassFilter.span_at_least(args.r)
    if mode == "distinct-count":
        ell = args.ell if args.ell is not None else k
        return ClassFilter.distinct_at_least(ell)
    return ClassFilter(mode)


def _parse_entries(text: str, p) -> tuple[tuple[int, ...], ...]:
    entries = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        entries.append(tuple(int(tok) % int(p)
                             for tok in chunk.replace(",", " ").split()))
    if not entries:
        raise ValueError("empty tuple specification")
    return tuple(entries)


def _parse_partition(text: str) -> tuple[tuple[int, ...], ...]:
    blocks = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        blocks.append(tuple(int(tok)
                            for tok in chunk.replace(",", " ").split()))
    if not blocks:
        raise ValueError("empty partition specification")
    return tuple(blocks)


def _cmd_gamma(args) -> int:
    started = time.perf_counter()
    res = gamma(args.p, args.m, args.k, tol=args.tol)
    payload = {"p": args.p, "m": args.m, "k": args.k, "gamma": res}
    if args.n is not None:
        payload["n"] = args.n
        payload["power"] = res.gamma ** args.n
        payload["set_size_bound"] = args.k * res.gamma ** args.n
        if not res.at_boundary:
            payload["monomials"] = monomial_count(args.p, args.m, args.k, args.n)
    _emit(args, "gamma", payload, started)
    return 0


def _cmd_validate(args) -> int:
    started = time.perf_counter()
    sys_spec = _load_system(args.system)
    report = validate(sys_spec)
    payload = {
        "p": sys_spec.p,
        "m": sys_spec.m,
        "k": sys_spec.k,
        "coeffs": sys_spec.coeffs,
        "homogeneous": sys_spec.homogeneous,
        "report": report,
    }
    _emit(args, "validate", payload, started)
    return 0 if report.ok else 1


def _cmd_solve(args) -> int:
    started = time.perf_counter()
    sys_spec = _load_system(args.system)
    points = _load_points(args, sys_spec.p)
    flt = _make_filter(args, sys_spec.k)
    count = 0
    listed = []
    for sol in enumerate_solutions(sys_spec, points, flt):
        count += 1
        if not args.count_only and len(listed) < args.limit:
            listed.append({
                "entries": sol.entries,
                "distinct_count": sol.distinct_count,
                "span_dim": sol.span_dim,
            })
    payload = {
        "mode": flt.mode,
        "points": len(points),
        "count": count,
        "listed": len(listed),
        "solutions": listed,
    }
    _emit(args, "solve", payload, started)
    return 0


def _cmd_weight(args) -> int:
    started = time.perf_counter()
    entries = _parse_entries(args.tuple, args.p)
    report = weight(entries, args.p)
    rendered = _jsonable(report)
    rendered["lines"] = ["".join(str(c) for c in line)
                         for line in report.lines]
    payload: dict = {"p": args.p, "entries": entries, "weight": rendered}
    failed = False
    sys_spec = _load_system(args.system) if args.system else None
    if args.check_properties:
        props = verify_weight_properties(entries, args.p, sys_spec=sys_spec)
        payload["properties"] = props
        failed = failed or not props.ok
    if args.check_partition:
        if sys_spec is None:
            raise ValueError("--check-partition needs --system")
        part = partition_structure(entries, sys_spec)
        payload["partition"] = part
        failed = failed or not part.lemma_ok
    _emit(args, "weight", payload, started)
    return 1 if failed else 0


def _cmd_slicerank(args) -> int:
    started = time.perf_counter()
    if args.action == "rank":
        tensor = read_tensor_file(args.tensor)
        if args.partition:
            orders = corollary_orders(_parse_partition(args.partition),
                                      tensor.length)
        else:
            orders = OrderFamily.all_increasing(tensor.length, tensor.k)
        rank_value = antichain_slice_rank(tensor, orders, cap=args.cap_support)
        payload = {
            "length": tensor.length,
            "k": tensor.k,
            "support_size": len(tensor.support),
            "rank": rank_value,
        }
        _emit(args, "slicerank", payload, started)
        return 0
    if args.action == "identity":
        sys_spec = _load_system(args.system)
        points = _load_points(args, sys_spec.p)
        seed = _resolve_seed(args)
        rng = spawn(seed, "identity")
        columns = [list(points) for _ in range(sys_spec.k)]
        ok = verify_polynomial_identity(sys_spec, columns,
                                        samples=args.samples, rng=rng)
        payload = {"length": len(points), "k": sys_spec.k,
                   "samples": args.samples, "identity_holds": ok}
        _emit(args, "slicerank", payload, started, seed=seed)
        return 0 if ok else 1
    if args.action == "diagonal":
        tensor = Tensor.from_function(
            args.p, args.length, args.k,
            lambda idx: 1 if len(set(idx)) == 1 else 0)
        orders = corollary_orders((tuple(range(args.k)),), args.length)
        rank_value = antichain_slice_rank(tensor, orders, cap=args.cap_support)
        payload = {"length": args.length, "k": args.k, "rank": rank_value,
                   "expected": args.length}
        _emit(args, "slicerank", payload, started)
        return 0 if rank_value == args.length else 1
    sys_spec = _load_system(args.system)
    bound = clp_upper_bound(sys_spec, args.n)
    g = gamma(sys_spec.p, sys_spec.m, sys_spec.k)
    payload = {"n": args.n, "k": sys_spec.k, "gamma": g, "bound": bound}
    _emit(args, "slicerank", payload, started)
    return 0


def _cmd_sample(args) -> int:
    started = time.perf_counter()
    if args.action == "containment":
        seed = _resolve_seed(args)
        check = verify_containment(args.p, args.n, args.d, args.s,
                                   trials=args.trials, seed=seed,
                                   method=args.method)
        _emit(args, "sample", check, started, seed=seed)
        return 0 if check.within_3sigma else 1
    sys_spec = _load_system(args.system)
    points = _load_points(args, sys_spec.p)
    seed = _resolve_seed(args)
    if args.action == "step-distinct":
        ell = args.ell if args.ell is not None else sys_spec.k
        rng = spawn(seed, "step-distinct")
        report = sampling_step_distinct(sys_spec, points, ell, args.d, rng,
                                        target=args.target, cap=args.cap_step)
    else:
        if args.w is None:
            raise ValueError("step-weight needs --w")
        rng = spawn(seed, "step-weight")
        report = sampling_step_weight(sys_spec, points, args.w, args.d, rng,
                                      target=args.target, cap=args.cap_step)
    _emit(args, "sample", report, started, seed=seed)
    return 0


def _cmd_extremal(args) -> int:
    started = time.perf_counter()
    sys_spec = _load_system(args.system)
    problem = AvoidanceProblem(sys_spec, _make_filter(args, sys_spec.k),
                               args.n, exclude_zero=args.exclude_zero)
    seed: int | None = None
    if args.greedy:
        seed = _resolve_seed(args)
        rng = spawn(seed, "greedy") if args.restarts else None
        result = greedy_lower_bound(problem, restarts=args.restarts, rng=rng)
    else:
        symmetry = False if args.no_symmetry else None
        result = exhaustive_max(problem, cap_points=args.cap_points,
                                symmetry=symmetry, threads=args.threads)
    _emit(args, "extremal", result, started, seed=seed)
    return 0


def _cmd_verify(args) -> int:
    started = time.perf_counter()
    sys_spec = _load_system(args.system)
    if args.theorem == "tao":
        mode = ClassFilter.not_all_equal()
        exclude_zero = False
    elif args.theorem == "distinct":
        mode = ClassFilter.distinct()
        exclude_zero = True
    else:
        if args.r is None:
            raise ValueError("--theorem rank needs --r")
        mode = ClassFilter.span_at_least(args.r)
        exclude_zero = True
    if args.exclude_zero:
        exclude_zero = True
    if args.include_zero:
        exclude_zero = False
    problem = AvoidanceProblem(sys_spec, mode, args.n,
                               exclude_zero=exclude_zero)
    report = verify_theorem_bound(problem, args.theorem,
                                  cap_points=args.cap_points,
                                  threads=args.threads)
    _emit(args, "verify", report, started)
    if report.holds is not None:
        return 0 if report.holds else 1
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "text", "csv"),
                        default="json", help="output format")
    parser.add_argument("--no-timestamp", action="store_true",
                        help="omit timestamps and elapsed times for "
                             "byte-identical reruns")


def _add_point_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--points", help="point set file")
    parser.add_argument("--n", type=int, help="use all of F_p^n instead")
    parser.add_argument("--exclude-zero", action="store_true",
                        help="drop the zero vector from --n point sets")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpsystems",
        description="Exact experiments with linear systems over F_p.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gamma", help="optimize the set-size base constant")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--tol", type=float, default=1e-12)
    g.add_argument("--n", type=int,
                   help="also report the bound k * gamma^n and the "
                        "monomial count at this n")
    _add_common(g)
    g.set_defaults(func=_cmd_gamma)

    v = sub.add_parser("validate", help="recheck system hypotheses")
    v.add_argument("--system", required=True)
    _add_common(v)
    v.set_defaults(func=_cmd_validate)

    s = sub.add_parser("solve", help="enumerate solutions over a point set")
    s.add_argument("--system", required=True)
    _add_point_source(s)
    s.add_argument("--mode", default="any",
                   choices=("any", "not-all-equal", "distinct", "span-dim",
                            "distinct-count"))
    s.add_argument("--r", type=int, help="span dimension threshold")
    s.add_argument("--ell", type=int, help="distinct entry threshold")
    s.add_argument("--limit", type=int, default=100,
                   help="maximum solutions listed in the report")
    s.add_argument("--count-only", action="store_true")
    _add_common(s)
    s.set_defaults(func=_cmd_solve)

    w = sub.add_parser("weight", help="weight and admissible-set structure "
                                      "of a tuple")
    w.add_argument("--tuple", required=True,
                   help="entries like '1,0;2,1;0,1' (';' between vectors)")
    w.add_argument("--p", type=int, required=True)
    w.add_argument("--system", help="system file for solution-dependent checks")
    w.add_argument("--check-properties", action="store_true")
    w.add_argument("--check-partition", action="store_true")
    _add_common(w)
    w.set_defaults(func=_cmd_weight)

    sr = sub.add_parser("slicerank", help="slice rank toolbox")
    sr_sub = sr.add_subparsers(dest="action", required=True)
    sr_rank = sr_sub.add_parser("rank", help="exact rank of an antichain "
                                             "tensor file")
    sr_rank.add_argument("--tensor", required=True)
    sr_rank.add_argument("--partition",
                         help="axis blocks like '0,1;2,3' for the "
                              "block orders")
    sr_rank.add_argument("--cap-support", type=int,
                         default=DEFAULT_SUPPORT_CAP)
    _add_common(sr_rank)
    sr_id = sr_sub.add_parser("identity", help="check the indicator "
                                               "product formula")
    sr_id.add_argument("--system", required=True)
    _add_point_source(sr_id)
    sr_id.add_argument("--samples", type=int, default=1000)
    sr_id.add_argument("--seed", type=int)
    _add_common(sr_id)
    sr_diag = sr_sub.add_parser("diagonal", help="rank of the diagonal "
                                                 "tensor (sanity demo)")
    sr_diag.add_argument("--p", type=int, default=2)
    sr_diag.add_argument("--length", type=int, required=True)
    sr_diag.add_argument("--k", type=int, required=True)
    sr_diag.add_argument("--cap-support", type=int,
                         default=DEFAULT_SUPPORT_CAP)
    _add_common(sr_diag)
    sr_bound = sr_sub.add_parser("bound", help="certified rank ceiling "
                                               "k * gamma^n")
    sr_bound.add_argument("--system", required=True)
    sr_bound.add_argument("--n", type=int, required=True)
    _add_common(sr_bound)
    sr.set_defaults(func=_cmd_slicerank)

    sa = sub.add_parser("sample", help="subspace sampling experiments")
    sa_sub = sa.add_subparsers(dest="action", required=True)
    sa_cont = sa_sub.add_parser("containment", help="subspace containment "
                                                    "probability check")
    sa_cont.add_argument("--p", type=int, required=True)
    sa_cont.add_argument("--n", type=int, required=True)
    sa_cont.add_argument("--d", type=int, required=True)
    sa_cont.add_argument("--s", type=int, required=True)
    sa_cont.add_argument("--trials", type=int, default=10**4)
    sa_cont.add_argument("--method", default="auto",
                         choices=("auto", "exhaustive", "monte-carlo"))
    sa_cont.add_argument("--seed", type=int)
    _add_common(sa_cont)
    for kind in ("step-distinct", "step-weight"):
        sa_step = sa_sub.add_parser(kind, help=f"one {kind} deletion step")
        sa_step.add_argument("--system", required=True)
        _add_point_source(sa_step)
        sa_step.add_argument("--d", type=int, required=True,
                             help="sampled subspace dimension")
        if kind == "step-distinct":
            sa_step.add_argument("--ell", type=int,
                                 help="distinct entry threshold (default k)")
        else:
            sa_step.add_argument("--w", type=int, help="weight value")
        sa_step.add_argument("--target", type=float,
                             help="threshold recorded in the report")
        sa_step.add_argument("--cap-step", type=int, default=10**6)
        sa_step.add_argument("--seed", type=int)
        _add_common(sa_step)
    sa.set_defaults(func=_cmd_sample)

    e = sub.add_parser("extremal", help="largest avoiding subset search")
    e.add_argument("--system", required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--mode", default="not-all-equal",
                   choices=("any", "not-all-equal", "distinct", "span-dim",
                            "distinct-count"))
    e.add_argument("--r", type=int)
    e.add_argument("--ell", type=int)
    e.add_argument("--exclude-zero", action="store_true")
    e.add_argument("--greedy", action="store_true",
                   help="randomized greedy lower bound instead of "
                        "exhaustive search")
    e.add_argument("--restarts", type=int, default=0)
    e.add_argument("--seed", type=int)
    e.add_argument("--threads", type=int, default=1)
    e.add_argument("--no-symmetry", action="store_true",
                   help="disable the linear-symmetry reduction")
    e.add_argument("--cap-points", type=int, default=DEFAULT_POINT_CAP)
    _add_common(e)
    e.set_defaults(func=_cmd_extremal)

    vf = sub.add_parser("verify", help="check a headline bound at desk scale")
    vf.add_argument("--system", required=True)
    vf.add_argument("--n", type=int, required=True)
    vf.add_argument("--theorem", required=True,
                    choices=("tao", "distinct", "rank"))
    vf.add_argument("--r", type=int, help="span threshold for --theorem rank")
    vf.add_argument("--exclude-zero", action="store_true")
    vf.add_argument("--include-zero", action="store_true")
    vf.add_argument("--threads", type=int, default=1)
    vf.add_argument("--cap-points", type=int, default=DEFAULT_POINT_CAP)
    _add_common(vf)
    vf.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, CapExceededError, DegenerateSystemError,
            DegenerateLineError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
