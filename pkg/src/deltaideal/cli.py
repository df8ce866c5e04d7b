"""Command-line entry point: ``deltaideal <command> ...``.

Exit status: 0 for clean results, 2 for INCONCLUSIVE verdicts, 1 for
errors, 64 for usage errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .delta_opt import OptimizerOptions, delta_invariant, max_normalized_delta
from .errors import DeltaIdealError
from .immersion import SampledImmersion, builtin_shape, ideality_residual, is_ideal, sample_points
from .immersion import verify_inequality
from .partitions import Partition, c_coefficient, c_coefficient_exact, enumerate_tuples
from .spectral import (
    antipodal_quotient,
    flat_torus_grid,
    icosphere,
    lambda1_mesh,
    mesh_from_json,
    octahedron,
    pullback_report,
    read_off,
    tetrahedron,
)
from .spectral.registry import _default_registry, load_registry
from .verdict import Outcome, covering_obstruction, ideality_criterion

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64
DEFAULT_SEED = 42


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_optimizer_flags(p):
    g = p.add_argument_group("optimizer")
    g.add_argument("--restarts", type=int, default=32)
    g.add_argument("--max-iterations", type=int, default=500)
    g.add_argument("--gradient-tol", type=float, default=1e-8)


def _add_tensor_flags(p):
    p.add_argument("--tensor", type=Path, help="curvature tensor JSON file")
    p.add_argument("--model", choices=["constant"], help="use a space-form tensor instead of a file")
    p.add_argument("--n", type=int, help="dimension for --model")
    p.add_argument("--c0", type=float, default=1.0, help="sectional curvature for --model constant")


def _add_common_flags(p, defaults):
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--format", choices=["json", "csv", "text"], default=d("json"))
    p.add_argument("--seed", type=int, default=d(DEFAULT_SEED), help="RNG seed (default 42)")
    p.add_argument("--verbose", action="store_true", default=d(False))
    p.add_argument("--registry", type=Path, default=d(None), help="alternative space registry JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="deltaideal", description="delta-invariants and ideal embeddings")
    _add_common_flags(parser, defaults=True)
    # repeated on every subcommand so the flags may follow it
    common = _Parser(add_help=False)
    _add_common_flags(common, defaults=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub_add = sub.add_parser
    sub.add_parser = lambda *a, **kw: sub_add(*a, parents=[common], **kw)

    p = sub.add_parser("delta", help="delta(n_1..n_k) = tau - inf(tau(L_1)+...+tau(L_k))",
                       description="Minimize tau(L_1)+...+tau(L_k) over mutually orthogonal "
                                   "subspaces and report delta = tau - min.")
    _add_tensor_flags(p)
    p.add_argument("--partition", type=int, nargs="*", default=[],
                   help="subspace dimensions, e.g. --partition 2 2 (omit for the empty tuple)")
    _add_optimizer_flags(p)

    p = sub.add_parser("delta-max", help="delta0 = max over tuples of delta/c",
                       description="Sweep every admissible tuple and report max delta/c.")
    _add_tensor_flags(p)
    _add_optimizer_flags(p)

    p = sub.add_parser("coeff", help="c(n_1..n_k) = n^2 (n+k-1-sum) / (2 (n+k-sum))",
                       description="Tabulate the sharp coefficient c for every admissible tuple.")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("lambda1", help="lambda1 = smallest positive lambda of Delta f = lambda f",
                       description="Registry value, or K v = lambda M v on a mesh "
                                   "(OFF/JSON file, icosphere:L, octahedron, torus-grid:N).")
    p.add_argument("target")
    p.add_argument("--quotient", choices=["antipodal"],
                   help="also solve on the antipodal quotient and check lambda1(base) >= lambda1(cover)")
    p.add_argument("--tol", type=float, default=1e-6, help="pullback check tolerance")

    p = sub.add_parser("check-ideal", help="ideal iff lambda1 = n * delta0",
                       description="Apply the criterion lambda1 = n * delta0 to a registered space.")
    p.add_argument("space")
    _add_optimizer_flags(p)

    p = sub.add_parser("obstruct", help="covering M -> N with lambda1(M) != lambda1(N)",
                       description="lambda1(N) >= lambda1(M) >= n delta0; a strict gap rules out "
                                   "ideal embeddings of N.")
    p.add_argument("cover")
    p.add_argument("base")
    _add_optimizer_flags(p)

    p = sub.add_parser("verify-inequality", help="delta(n_1..n_k) <= c(n_1..n_k) H^2 pointwise",
                       description="Check delta <= c H^2 and H^2 = delta0 on a builtin shape "
                                   "or a sampled-grid immersion.")
    p.add_argument("--shape", help="builtin shape: sphere, plane, cylinder, torus, ellipsoid, product-torus")
    p.add_argument("--params", type=float, nargs="*", default=[])
    p.add_argument("--sampled", type=Path, help="sampled-grid immersion JSON")
    p.add_argument("--points", type=int, default=100)
    _add_optimizer_flags(p)
    return parser


def _optimizer(args) -> OptimizerOptions:
    return OptimizerOptions(
        restarts=args.restarts, max_iterations=args.max_iterations,
        gradient_tol=args.gradient_tol, rng_seed=args.seed,
    )


def _tensor(args):
    if args.tensor is not None:
        return io.load_tensor(args.tensor)
    if args.model == "constant":
        if args.n is None:
            raise UsageError("--model constant needs --n")
        return io.load_tensor({"n": args.n, "model": "constant", "c0": args.c0})
    raise UsageError("give --tensor FILE or --model constant --n N")


def _mesh(target):
    name, _, arg = target.partition(":")
    if name == "icosphere":
        return icosphere(int(arg or 3))
    if name == "octahedron":
        return octahedron()
    if name == "tetrahedron":
        return tetrahedron()
    if name == "torus-grid":
        return flat_torus_grid(int(arg or 64))
    path = Path(target)
    if path.suffix.lower() == ".off":
        return read_off(path)
    return mesh_from_json(path)


def _space(registry, name):
    if name not in registry:
        raise KeyError(f"no registered space named {name!r}")
    return registry[name]


def _text(obj, indent=0):
    pad = "  " * indent
    lines = []
    for k, v in obj.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_text(v, indent + 1))
        else:
            lines.append(f"{pad}{k}: {v}")
    return lines


def _emit(payload, fmt, out, csv_text=None):
    if fmt == "json":
        out.write(io.dumps(payload) + "\n")
    elif fmt == "csv" and csv_text is not None:
        out.write(csv_text)
    else:
        out.write("\n".join(_text(payload)) + "\n")


def _cmd_delta(args):
    R = _tensor(args)
    p = Partition(R.n, tuple(args.partition))
    res = delta_invariant(R, p, _optimizer(args))
    return res.to_json(verbose=args.verbose), EXIT_OK, None


def _cmd_delta_max(args):
    R = _tensor(args)
    res = max_normalized_delta(R, _optimizer(args))
    table = [
        {"partition": p.to_json(), "delta": d, "ratio": r, "converged": c}
        for p, d, r, c in res.table
    ]
    payload = {"delta0": res.value, "partition": res.partition.to_json(),
               "converged": res.converged, "table": table}
    return payload, EXIT_OK, None


def _cmd_coeff(args):
    rows = [
        {"partition": p.to_json(), "c": c_coefficient(p), "exact": str(c_coefficient_exact(p))}
        for p in enumerate_tuples(args.n)
    ]
    csv_text = "partition,c,exact\n" + "".join(
        f"\"{Partition(args.n, r['partition'])}\",{r['c']!r},{r['exact']}\n" for r in rows
    )
    return {"n": args.n, "coefficients": rows}, EXIT_OK, csv_text


def _cmd_lambda1(args, registry):
    if args.target in registry:
        s = registry[args.target]
        return {"space": s.name, "lambda1": s.require_lambda1(), "source": s.source}, EXIT_OK, None
    mesh = _mesh(args.target)
    cover = lambda1_mesh(mesh, seed=args.seed)
    payload = {"mesh": args.target, "result": cover.to_json()}
    if args.quotient == "antipodal":
        base = lambda1_mesh(antipodal_quotient(mesh), seed=args.seed)
        payload["quotient"] = base.to_json()
        payload["pullback"] = pullback_report(cover, base, args.tol)
    return payload, EXIT_OK, None


def _verdict_exit(v):
    return EXIT_INCONCLUSIVE if v.outcome is Outcome.INCONCLUSIVE else EXIT_OK


def _cmd_check_ideal(args, registry):
    v = ideality_criterion(_space(registry, args.space), opts=_optimizer(args))
    return v.to_json(), _verdict_exit(v), None


def _cmd_obstruct(args, registry):
    v = covering_obstruction(_space(registry, args.cover), _space(registry, args.base), _optimizer(args))
    return v.to_json(), _verdict_exit(v), None


def _cmd_verify_inequality(args):
    opts = _optimizer(args)
    if (args.shape is None) == (args.sampled is None):
        raise UsageError("give exactly one of --shape or --sampled")
    if args.sampled is not None:
        im = SampledImmersion.from_json(args.sampled)
        points = None
    else:
        im = builtin_shape(args.shape, *args.params)
        points = sample_points(im, args.points, args.seed)
    report = verify_inequality(im, points, opts)
    residuals = ideality_residual(im, points, opts)
    payload = report.to_json(records=args.verbose)
    payload["shape"] = args.shape or "sampled"
    payload["ideality"] = {
        "ideal": is_ideal(residuals),
        "min_residual": float(np.min(residuals)),
        "max_residual": float(np.max(residuals)),
    }
    status = EXIT_ERROR if report.violated else EXIT_OK
    return payload, status, report.to_csv()


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        registry = load_registry(args.registry) if args.registry else _default_registry()
        if args.command == "delta":
            payload, status, csv_text = _cmd_delta(args)
        elif args.command == "delta-max":
            payload, status, csv_text = _cmd_delta_max(args)
        elif args.command == "coeff":
            payload, status, csv_text = _cmd_coeff(args)
        elif args.command == "lambda1":
            payload, status, csv_text = _cmd_lambda1(args, registry)
        elif args.command == "check-ideal":
            payload, status, csv_text = _cmd_check_ideal(args, registry)
        elif args.command == "obstruct":
            payload, status, csv_text = _cmd_obstruct(args, registry)
        else:
            payload, status, csv_text = _cmd_verify_inequality(args)
    except UsageError as exc:
        parser.print_usage(err)
        err.write(f"deltaideal: error: {exc}\n")
        return EXIT_USAGE
    except (DeltaIdealError, ValueError, KeyError, OSError) as exc:
        err.write(f"deltaideal: {type(exc).__name__}: {exc}\n")
        return EXIT_ERROR
    _emit(payload, args.format, out, csv_text)
    return status


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
