"""Command-line front end.

Machine-readable JSON goes to stdout, human-readable notes to stderr.
Exit codes: 0 success, 2 invalid input, 3 numerical or validation failure,
4 property-suite failure.  Every command is deterministic given its flags
and seed.  The COPDEP_THREADS environment variable caps worker parallelism;
all current computations are sequential, so any positive cap is honored.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    CopdepError,
    CopulaValidationError,
    DegenerateBoundError,
    DegenerateMarginalError,
    EvaluationError,
    IncompatibleOperandsError,
    InsufficientDataError,
    InvalidArgumentError,
    InvalidDataError,
    RebalanceError,
)
from .estimation import (
    ResolutionPolicy,
    choose_resolution,
    fit_checkerboard,
    pseudo_observations,
    read_csv,
)
from .generators import (
    SynthModel,
    assignment_copula,
    generate,
    make_rng,
    random_copula,
    random_star_pair,
)
from .grid import (
    CheckerboardCopula,
    GroupSplit,
    comonotone_copula,
    independence_copula,
    load_copula,
    save_copula,
)
from .measures import (
    MeasureKind,
    compute_measure,
    group_tau,
    kendall_cdf,
    max_bound,
    tau_quadratic,
)
from .starprod import TransformCase, dpi_report, equitability_suite, identity_coupling, star

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_SUITE_FAILURE = 4

_INPUT_ERRORS = (
    InvalidArgumentError,
    InvalidDataError,
    InsufficientDataError,
    FileNotFoundError,
)
_NUMERICAL_ERRORS = (
    CopulaValidationError,
    RebalanceError,
    DegenerateMarginalError,
    IncompatibleOperandsError,
    DegenerateBoundError,
    EvaluationError,
)


def _note(message: str) -> None:
    print(message, file=sys.stderr)


def _emit(payload: dict) -> None:
    print(json.dumps(payload))


def thread_cap() -> int:
    """Worker cap from COPDEP_THREADS (>= 1); unset means 1."""
    raw = os.environ.get("COPDEP_THREADS")
    if raw is None:
        return 1
    try:
        cap = int(raw)
    except ValueError as exc:
        raise InvalidArgumentError(f"COPDEP_THREADS must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise InvalidArgumentError(f"COPDEP_THREADS must be >= 1, got {cap}")
    return cap


def _parse_columns(spec: str | None) -> list | None:
    if spec is None:
        return None
    return [tok.strip() for tok in spec.split(",") if tok.strip()]


def _indices(spec: str | None, names: list[str]) -> list[int] | None:
    cols = _parse_columns(spec)
    if cols is None:
        return None
    out = []
    for c in cols:
        if c in names:
            out.append(names.index(c))
        else:
            try:
                out.append(int(c))
            except ValueError as exc:
                raise InvalidArgumentError(f"unknown column {c!r}") from exc
    return out


def _resolve_split(u_cols, v_cols, n_cols: int) -> GroupSplit:
    """Index lists to a split; default target is the last column."""
    v = v_cols if v_cols is not None else [n_cols - 1]
    u = u_cols if u_cols is not None else [j for j in range(n_cols) if j not in v]
    return GroupSplit(tuple(u), tuple(v))


def _looks_like_json(path: Path) -> bool:
    if path.suffix.lower() == ".json":
        return True
    with path.open("rb") as fh:
        head = fh.read(64).decode("utf-8", errors="replace").lstrip()
    return head.startswith("{")


def _load_measure_input(args) -> tuple[CheckerboardCopula, GroupSplit | None, int | None]:
    """A copula plus split from either a copula JSON file or a CSV sample."""
    path = Path(args.input)
    if _looks_like_json(path):
        copula = load_copula(path)
        names: list[str] = []
        n_cols = copula.dims
        sample_size = None
    else:
        data, names = read_csv(path, _parse_columns(args.columns))
        pseudo = pseudo_observations(data)
        policy = _policy_from_args(args)
        res = choose_resolution(pseudo.n_rows, pseudo.n_cols, policy)
        copula = fit_checkerboard(pseudo, res, max_resolution=policy.max_m)
        n_cols = pseudo.n_cols
        sample_size = pseudo.n_rows
    split = None
    if args.kind != "mutual_information":
        split = _resolve_split(
            _indices(args.u_cols, names), _indices(args.v_cols, names), n_cols
        )
    return copula, split, sample_size


def _policy_from_args(args) -> ResolutionPolicy:
    auto = getattr(args, "auto_resolution", False)
    fixed = getattr(args, "resolution", None)
    if auto and fixed is not None:
        raise InvalidArgumentError("--resolution and --auto-resolution are mutually exclusive")
    if fixed is None:
        return ResolutionPolicy(mode="automatic")
    return ResolutionPolicy(mode="fixed", fixed_m=int(fixed), max_m=max(128, int(fixed)))


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------


def cmd_estimate(args) -> int:
    data, names = read_csv(args.input, _parse_columns(args.columns))
    pseudo = pseudo_observations(data)
    policy = _policy_from_args(args)
    res = choose_resolution(pseudo.n_rows, pseudo.n_cols, policy)
    copula = fit_checkerboard(pseudo, res, max_resolution=policy.max_m)
    report = copula.validate()
    save_copula(copula, args.output)
    _note(f"columns: {names}")
    _note(f"fitted {pseudo.n_rows} rows at resolutions {list(res)}")
    _note(f"validate: {report.summary()}")
    _emit(
        {
            "output": str(args.output),
            "rows": pseudo.n_rows,
            "resolutions": list(res),
            "ties": list(pseudo.tie_counts),
            "valid": report.passed,
        }
    )
    return EXIT_OK if report.passed else EXIT_NUMERICAL


def cmd_measure(args) -> int:
    tag = args.kind
    if args.normalize and tag == "group_tau":
        tag = "group_tau_normalized"
    kind = MeasureKind(tag, args.alpha)
    copula, split, sample_size = _load_measure_input(args)
    report = compute_measure(copula, split, kind, quad_order=args.quad_order)
    if sample_size is not None:
        report = replace(report, sample_size=sample_size)
    payload = report.to_json_dict()
    if kind.tag == "group_tau" and report.upper_bound is not None:
        if report.upper_bound >= 1e-12:
            payload["normalized_value"] = report.value / report.upper_bound
        else:
            payload["normalized_value"] = None
            _note("upper bound is degenerate; normalized value omitted")
    _note(f"{kind.tag}: {report.value:.12g}")
    _emit(payload)
    return EXIT_OK


def cmd_star(args) -> int:
    a = load_copula(args.a)
    b = load_copula(args.b)
    result = star(a, b, args.n)
    save_copula(result, args.output)
    _note(f"composed {a.resolutions} * {b.resolutions} -> {result.resolutions}")
    _emit(
        {
            "output": str(args.output),
            "resolutions": list(result.resolutions),
            "middle_block": args.n,
        }
    )
    return EXIT_OK


def cmd_synth(args) -> int:
    correlation = None
    if args.model == "gaussian":
        rho = args.theta if args.theta is not None else 0.5
        correlation = tuple(
            tuple(1.0 if i == j else rho for j in range(args.dimension))
            for i in range(args.dimension)
        )
    model = SynthModel(
        tag=args.model,
        dimension=args.dimension,
        theta=args.theta if args.model == "mixture" else None,
        sigma=args.sigma,
        correlation=correlation,
        seed=args.seed,
    )
    data = generate(model, args.rows)
    header = ",".join(f"x{j}" for j in range(data.shape[1] - 1)) + ",y"
    lines = [header]
    lines += [",".join(repr(float(x)) for x in row) for row in data]
    Path(args.output).write_text("\n".join(lines) + "\n", encoding="utf-8")
    _note(f"wrote {args.rows} rows of {args.model} to {args.output}")
    _emit({"output": str(args.output), "rows": args.rows, "model": args.model, "seed": args.seed})
    return EXIT_OK


def cmd_verify(args) -> int:
    suites = {
        "axioms": _suite_axioms,
        "dpi": _suite_dpi,
        "equitability": _suite_equitability,
        "bounds": _suite_bounds,
    }
    if args.suite not in suites:
        raise InvalidArgumentError(
            f"unknown suite {args.suite!r}; choose from {sorted(suites)}"
        )
    checks = suites[args.suite](trials=args.trials, seed=args.seed)
    results = []
    for name, passed, detail in checks:
        _note(f"{'PASS' if passed else 'FAIL'}: {name} ({detail})")
        results.append({"name": name, "passed": passed, "detail": detail})
    all_passed = all(r["passed"] for r in results)
    _emit({"suite": args.suite, "passed": all_passed, "results": results})
    return EXIT_OK if all_passed else EXIT_SUITE_FAILURE


# ----------------------------------------------------------------------
# verification suites
# ----------------------------------------------------------------------


def _suite_axioms(trials: int, seed: int):
    checks = []
    for n in (1, 2, 3):
        cop = independence_copula((8,) * (n + 1))
        split = GroupSplit(tuple(range(n)), (n,))
        val = tau_quadratic(cop, split).value
        checks.append(
            (f"independence zero (n={n})", abs(val) <= 1e-12, f"value {val:.3e}")
        )
    for m in (4, 16, 64):
        cop = comonotone_copula(2, m)
        val = tau_quadratic(cop, GroupSplit((0,), (1,))).value
        target = 1.0 - 1.0 / m
        checks.append(
            (
                f"complete dependence (m={m})",
                abs(val - target) <= 1e-12,
                f"value {val:.12f} vs {target:.12f}",
            )
        )
    rng = make_rng(seed)
    worst = (0.0, 1.0)
    ok = True
    for _ in range(trials):
        cop = random_copula((4, 4, 4), rng)
        val = tau_quadratic(cop, GroupSplit((0, 1), (2,))).value
        worst = (min(worst[0], val), max(worst[1], val))
        ok = ok and -1e-12 <= val <= 1.0 + 1e-9
    checks.append((f"range on {trials} random grids", ok, f"range {worst}"))
    return checks


def _suite_dpi(trials: int, seed: int):
    rng = make_rng(seed)
    checks = []
    kinds = (MeasureKind("tau_quadratic"), MeasureKind("tau_alpha", 1.0))
    violations = 0
    for t in range(trials):
        n = 1 if t % 2 == 0 else 2
        a, b = random_star_pair(n, 8 if n == 1 else 4, rng)
        for kind in kinds:
            rep = dpi_report(a, b, n, kind)
            if not rep.holds:
                violations += 1
    checks.append(
        (f"chain <= direct on {trials} random pairs", violations == 0, f"{violations} violations")
    )
    gap = 0.0
    for n in (1, 2):
        b = assignment_copula(n, 8, make_rng(seed + n))
        rep = dpi_report(identity_coupling(n, 8), b, n, MeasureKind("tau_quadratic"))
        gap = max(gap, abs(rep.tau_chain - rep.tau_direct))
    checks.append(("identity coupling equality", gap <= 1e-12, f"gap {gap:.3e}"))
    return checks


def _suite_equitability(trials: int, seed: int):
    model = SynthModel(tag="functional", dimension=3, seed=seed)
    data = generate(model, 4000)
    split = GroupSplit((0, 1), (2,))
    transforms = [
        TransformCase(kind="column_map", label="exp on first driver", column=0, mapping=np.exp),
        TransformCase(
            kind="column_map", label="cube on second driver", column=1, mapping=lambda x: x**3
        ),
        TransformCase(
            kind="column_map", label="negate target", column=2, mapping=lambda x: -x
        ),
        TransformCase(kind="permute_conditioning", label="swap drivers", permutation=(1, 0)),
    ]
    report = equitability_suite(
        data=data, split=split, transforms=transforms, resolutions=(8, 8, 8)
    )
    checks = [
        (f"invariance: {r.label}", r.passed, f"deviation {r.deviation:.3e}")
        for r in report.results
    ]
    return checks


def _suite_bounds(trials: int, seed: int):
    checks = []
    one = max_bound(kendall_cdf(independence_copula((8, 8)), (1,)))
    checks.append(("single-axis bound is 1", one == 1.0, f"value {one!r}"))
    five_sixths = max_bound(kendall_cdf(independence_copula((64, 64)), (0, 1)))
    checks.append(
        (
            "independence pair bound near 5/6",
            abs(five_sixths - 5.0 / 6.0) <= 0.01,
            f"value {five_sixths:.6f}",
        )
    )
    rng = make_rng(seed)
    violations = 0
    worst_gap = 0.0
    for _ in range(trials):
        cop = random_copula((4, 4, 4, 4), rng)
        rep = group_tau(cop, GroupSplit((0, 1), (2, 3)))
        gap = rep.value - rep.upper_bound
        worst_gap = max(worst_gap, gap)
        if gap > 1e-9:
            violations += 1
    checks.append(
        (
            f"group value <= bound on {trials} random grids",
            violations == 0,
            f"worst excess {worst_gap:.3e}",
        )
    )
    return checks


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="copdep",
        description="Directional dependence measures on checkerboard copulas",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="fit a copula grid from a CSV sample")
    est.add_argument("--input", required=True)
    est.add_argument("--output", required=True)
    est.add_argument("--columns", help="comma-separated names or 0-based indices")
    est.add_argument("--resolution", type=int)
    est.add_argument("--auto-resolution", action="store_true")
    est.set_defaults(handler=cmd_estimate)

    mea = sub.add_parser("measure", help="compute a dependence measure")
    mea.add_argument("--input", required=True, help="copula JSON or CSV sample")
    mea.add_argument("--columns", help="CSV only: columns to load")
    mea.add_argument("--u-cols", help="conditioning columns (names or indices)")
    mea.add_argument("--v-cols", help="target columns (default: last)")
    mea.add_argument(
        "--kind",
        default="tau_quadratic",
        choices=[
            "tau_quadratic",
            "tau_alpha",
            "renyi_alpha",
            "renyi_limit",
            "mutual_information",
            "group_tau",
            "group_tau_normalized",
            "averaged_dependence",
        ],
    )
    mea.add_argument("--alpha", type=float)
    mea.add_argument("--resolution", type=int)
    mea.add_argument("--auto-resolution", action="store_true")
    mea.add_argument("--quad-order", type=int, default=16)
    mea.add_argument("--normalize", action="store_true")
    mea.set_defaults(handler=cmd_measure)

    stp = sub.add_parser("star", help="compose two copula files through a middle block")
    stp.add_argument("a", help="copula JSON with conditioning + middle axes")
    stp.add_argument("b", help="copula JSON with middle + target axes")
    stp.add_argument("--n", type=int, required=True, help="middle block size")
    stp.add_argument("--output", required=True)
    stp.set_defaults(handler=cmd_star)

    syn = sub.add_parser("synth", help="write a synthetic CSV sample")
    syn.add_argument(
        "--model",
        required=True,
        choices=["independent", "comonotone", "mixture", "functional", "gaussian", "square_law"],
    )
    syn.add_argument("--rows", type=int, default=1000)
    syn.add_argument("--dimension", type=int, default=2)
    syn.add_argument("--theta", type=float)
    syn.add_argument("--sigma", type=float, default=0.0)
    syn.add_argument("--seed", type=int, default=0)
    syn.add_argument("--output", required=True)
    syn.set_defaults(handler=cmd_synth)

    ver = sub.add_parser("verify", help="run a property suite")
    ver.add_argument("--suite", required=True, choices=["axioms", "dpi", "equitability", "bounds"])
    ver.add_argument("--trials", type=int, default=50)
    ver.add_argument("--seed", type=int, default=0)
    ver.set_defaults(handler=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        thread_cap()
        return args.handler(args)
    except _INPUT_ERRORS as exc:
        _note(f"error: {exc}")
        return EXIT_INVALID_INPUT
    except _NUMERICAL_ERRORS as exc:
        _note(f"error: {exc}")
        return EXIT_NUMERICAL
    except CopdepError as exc:
        _note(f"error: {exc}")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
