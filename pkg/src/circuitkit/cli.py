"""Command-line front door.

Exit codes: 0 success, 1 mathematical finding (a verified bound failed or
the decomposition conjecture is violated), 2 input or usage error.
Infeasible or unbounded instances are ordinary results, reported with
exit 0.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import augment, graver, lp as lpmod, proximity, serialize
from .generate import FAMILIES, GeneratorSpec, generate as _generate
from .errors import (
    AuditFailure,
    BadParameters,
    CircuitKitError,
    InfeasibleSystem,
    InputFormatError,
    OracleInfeasible,
    UnboundedDirection,
    UnboundedRegion,
)
from .imbalance import diameter_bound, imbalances, is_TU, kappa_star
from .subspace import Subspace

_INPUT_ERRORS = (
    InputFormatError,
    BadParameters,
)

RULES = ("steepest", "dantzig", "deepest", "ratio", "support", "guided")


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return serialize.loads(fh.read())
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc


def _write_text(path, text: str):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _emit(args, obj):
    _write_text(getattr(args, "output", None), serialize.dumps(obj))


def _load_lp(path: str) -> lpmod.LPInstance:
    return serialize.lp_from_obj(_read_json(path))


def _load_matrix(path: str):
    return serialize.load_matrix(_read_json(path))


def _load_vector(obj_or_key, doc, length=None):
    if obj_or_key not in doc:
        raise InputFormatError(f"document is missing {obj_or_key!r}")
    return serialize.vec_from_obj(doc[obj_or_key], length=length)


def _parse_epsilon(text: str) -> Fraction:
    return serialize.parse_frac(text)


def _cmd_analyze(args) -> int:
    A = _load_matrix(args.input)
    W = Subspace.from_kernel_matrix(A)
    rep = imbalances(W)
    star = kappa_star(W)
    payload = {
        "ambient_dim": A.cols,
        "subspace_dim": W.dim,
        "kappa": serialize.frac_str(rep.kappa),
        "kappa_dot": str(rep.kappa_dot),
        "kappa_bar": str(rep.kappa_bar),
        "kappa_star_power": {
            "product": serialize.frac_str(star.value.product),
            "length": star.value.length,
        },
        "kappa_star_cycle": list(star.witness_cycle),
        "is_tu": is_TU(A)[0] if A.is_integral() else False,
    }
    report = serialize.make_report("analyze", payload)
    if args.format == "csv":
        lines = []
        for key in ("kappa", "kappa_dot", "kappa_bar"):
            lines.append(f"{key},{payload[key]}")
        _write_text(args.output, "\n".join(lines) + "\n")
        return 0
    _emit(args, report)
    return 0


def _result_payload(res: lpmod.LPResult) -> dict:
    payload = {"status": res.status, "pivots": res.pivots}
    if res.x is not None:
        payload["x"] = serialize.vec_to_obj(res.x)
        payload["objective"] = serialize.frac_str(res.objective)
    if res.y is not None:
        payload["y"] = serialize.vec_to_obj(res.y)
    if res.certificate is not None:
        payload["certificate"] = serialize.vec_to_obj(res.certificate)
    return payload


def _cmd_solve(args) -> int:
    lp = _load_lp(args.input)
    if args.rule is None:
        res = lpmod.solve(lp)
        _emit(args, serialize.make_report("solve", _result_payload(res)))
        return 0
    try:
        if args.rule == "guided":
            res = lpmod.solve(lp)
            if res.status != lpmod.OPTIMAL:
                _emit(args, serialize.make_report("solve", _result_payload(res)))
                return 0
            start = augment.run(lp, rule="support").final_x
            trace = augment.guided_walk(lp, start, res.x)
        else:
            trace = augment.run(lp, rule=args.rule, cap=args.cap)
    except InfeasibleSystem:
        _emit(args, serialize.make_report("solve", {"status": "infeasible"}))
        return 0
    except UnboundedDirection:
        _emit(args, serialize.make_report("solve", {"status": "unbounded"}))
        return 0
    trace_obj = serialize.trace_to_obj(trace)
    if args.trace:
        _write_text(args.trace, serialize.dumps(trace_obj))
    final_x = trace.final_x
    cost = sum((ci * xi for ci, xi in zip(lp.c, final_x)), Fraction(0))
    payload = {
        "rule": args.rule,
        "terminated": trace.terminated,
        "steps": len(trace.steps),
        "x": serialize.vec_to_obj(final_x),
        "objective": serialize.frac_str(cost),
    }
    if not args.trace:
        payload["trace"] = trace_obj
    _emit(args, serialize.make_report("solve", payload))
    return 0


def _cmd_prox(args) -> int:
    doc = _read_json(args.input)
    A = serialize.load_matrix(doc)
    W = Subspace.from_kernel_matrix(A)
    n = A.cols
    if args.check == "feasibility":
        d = _load_vector("d", doc, length=n)
        try:
            wit = proximity.hoffman_feasibility_witness(W, d)
        except InfeasibleSystem as exc:
            payload = {"check": "feasibility", "status": "infeasible"}
            if exc.certificate is not None:
                payload["certificate"] = serialize.vec_to_obj(exc.certificate)
            _emit(args, serialize.make_report("prox", payload))
            return 0
        payload = {
            "check": "feasibility",
            "status": "feasible",
            "point": serialize.vec_to_obj(wit.point),
            "bound": serialize.frac_str(wit.bound),
            "distance": serialize.frac_str(wit.distance),
        }
        _emit(args, serialize.make_report("prox", payload))
        return 0
    if args.check == "optimal":
        d = _load_vector("d", doc, length=n)
        c = _load_vector("c", doc, length=n)
        try:
            wit = proximity.hoffman_opt_witness(W, d, c)
        except InfeasibleSystem as exc:
            payload = {"check": "optimal", "status": "infeasible"}
            if exc.certificate is not None:
                payload["certificate"] = serialize.vec_to_obj(exc.certificate)
            _emit(args, serialize.make_report("prox", payload))
            return 0
        payload = {
            "check": "optimal",
            "lambda_set": list(proximity.lambda_set(d, c)),
            "point": serialize.vec_to_obj(wit.point),
            "bound": serialize.frac_str(wit.bound),
            "distance": serialize.frac_str(wit.distance),
        }
        _emit(args, serialize.make_report("prox", payload))
        return 0
    if args.check == "transfer":
        d = _load_vector("d", doc, length=n)
        x_tilde = _load_vector("x_tilde", doc, length=n)
        s = _load_vector("s", doc, length=n)
        bound, R = proximity.transfer_bound(W, x_tilde, s, d)
        payload = {
            "check": "transfer",
            "bound": serialize.frac_str(bound),
            "fixed_to_zero": list(R),
        }
        _emit(args, serialize.make_report("prox", payload))
        return 0
    # fixing
    for key in ("b", "u", "c1", "c2", "x1", "y1"):
        if key not in doc:
            raise InputFormatError(f"fixing check needs {key!r}")
    b = serialize.vec_from_obj(doc["b"], length=A.rows)
    u = serialize.vec_from_obj(doc["u"], length=n)
    c1 = serialize.vec_from_obj(doc["c1"], length=n)
    c2 = serialize.vec_from_obj(doc["c2"], length=n)
    x1 = serialize.vec_from_obj(doc["x1"], length=n)
    y1 = serialize.vec_from_obj(doc["y1"], length=A.rows)
    R0, Ru = proximity.fixing_sets_bounds(A, b, u, c1, c2, x1, y1)
    payload = {"check": "fixing", "fixed_to_zero": list(R0), "fixed_to_upper": list(Ru)}
    _emit(args, serialize.make_report("prox", payload))
    return 0


def _cmd_blackbox(args) -> int:
    doc = _read_json(args.input)
    A = serialize.load_matrix(doc)
    W = Subspace.from_kernel_matrix(A)
    d = _load_vector("d", doc, length=A.cols)
    eps = _parse_epsilon(args.epsilon) if args.epsilon else None
    try:
        x = proximity.feasibility_simplified(W, d, epsilon=eps, seed=args.seed)
    except OracleInfeasible as exc:
        payload = {"status": "infeasible", "detail": str(exc)}
        _emit(args, serialize.make_report("blackbox", payload))
        return 0
    payload = {
        "status": "feasible",
        "x": serialize.vec_to_obj(x),
        "seed": args.seed,
        "epsilon": serialize.frac_str(eps) if eps is not None else None,
    }
    _emit(args, serialize.make_report("blackbox", payload))
    return 0


def _cmd_graver(args) -> int:
    A = _load_matrix(args.input)
    basis = graver.graver_basis(A)
    payload = {
        "count": len(basis.elements),
        "elements": [[str(v) for v in g] for g in basis.elements],
        "g1": str(basis.g1),
        "ginf": str(basis.ginf),
    }
    _emit(args, serialize.make_report("graver", payload))
    return 0


def _cmd_conjecture(args) -> int:
    A = _load_matrix(args.input)
    W = Subspace.from_kernel_matrix(A)
    doc = _read_json(args.target)
    if isinstance(doc, dict):
        z = _load_vector("z", doc, length=A.cols)
    else:
        z = serialize.vec_from_obj(doc, length=A.cols)
    report = graver.conjecture_decompose(W, z)
    payload = {
        "status": report.status,
        "target": [str(v) for v in report.target],
        "searched": report.searched,
        "decomposition": [
            {"coefficient": serialize.frac_str(lam), "circuit": [str(v) for v in g]}
            for lam, g in report.decomposition
        ],
    }
    _emit(args, serialize.make_report("conjecture", payload))
    return 1 if report.status == "violated" else 0


def _cmd_appendix(args) -> int:
    rep = graver.appendix_counterexample()
    payload = {
        "kappa_dot": str(rep.kappa_dot),
        "qualifying_vectors": [[str(v) for v in w] for w in rep.vectors],
        "pair_products": [
            {"v": list(v), "w": list(w), "rows": [list(r) for r in rows]}
            for v, w, rows in rep.products
        ],
        "witness_columns": [list(w) for w in rep.witnesses],
    }
    _emit(args, serialize.make_report("appendix", payload))
    return 0


def _cmd_generate(args) -> int:
    spec = GeneratorSpec(
        family=args.family, size=args.size, rows=args.rows, seed=args.seed
    )
    made = _generate(spec)
    if isinstance(made, lpmod.LPInstance):
        text = (
            serialize.lp_to_csv(made)
            if args.format == "csv"
            else serialize.dumps(serialize.lp_to_obj(made))
        )
    else:
        if args.format == "csv":
            text = serialize.matrix_to_csv(made)
        else:
            text = serialize.dumps(
                {
                    "schema_version": serialize.SCHEMA_VERSION,
                    "A": serialize.matrix_to_obj(made),
                }
            )
    _write_text(args.output, text)
    return 0


def _cmd_diameter(args) -> int:
    lp = _load_lp(args.input)
    W = Subspace.from_kernel_matrix(lp.A)
    rep = imbalances(W)
    n = lp.A.cols
    m = lp.A.rows
    try:
        diam = lpmod.edge_graph_diameter(lp)
    except UnboundedRegion:
        _emit(args, serialize.make_report("diameter", {"status": "unbounded"}))
        return 0
    except InfeasibleSystem:
        _emit(args, serialize.make_report("diameter", {"status": "infeasible"}))
        return 0
    bound = diameter_bound(n, m, rep.kappa)
    payload = {
        "status": "ok",
        "diameter": diam,
        "bound": serialize.frac_str(bound),
        "within": diam <= bound,
    }
    _emit(args, serialize.make_report("diameter", payload))
    return 1 if diam > bound else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circuitkit",
        description="Exact circuit-imbalance analysis for rational subspaces.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, output=True):
        if output:
            p.add_argument("--output", help="write the report here (default stdout)")

    p = sub.add_parser("analyze", help="circuit imbalance measures of ker(A)")
    p.add_argument("--input", required=True, help="matrix JSON")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    common(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("solve", help="exact LP solve or augmentation walk")
    p.add_argument("--input", required=True, help="LP JSON")
    p.add_argument("--rule", choices=RULES, help="augmentation rule (default: simplex)")
    p.add_argument("--cap", type=int, help="iteration cap for augmentation")
    p.add_argument("--trace", help="write the augmentation trace JSON here")
    common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("prox", help="proximity bounds with exact verification")
    p.add_argument("--input", required=True, help="JSON with A plus check-specific fields")
    p.add_argument(
        "--check",
        choices=("feasibility", "optimal", "transfer", "fixing"),
        default="feasibility",
    )
    common(p)
    p.set_defaults(func=_cmd_prox)

    p = sub.add_parser("blackbox", help="exact feasibility from approximate oracles")
    p.add_argument("--input", required=True, help="JSON with A and d")
    p.add_argument("--epsilon", help="oracle accuracy as p/q")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=_cmd_blackbox)

    p = sub.add_parser("graver", help="Graver basis with norm bounds")
    p.add_argument("--input", required=True, help="integer matrix JSON")
    common(p)
    p.set_defaults(func=_cmd_graver)

    p = sub.add_parser("conjecture", help="circuit decomposition with integer scaling")
    p.add_argument("--input", required=True, help="matrix JSON (kernel of A)")
    p.add_argument("--target", required=True, help="integer kernel vector JSON")
    common(p)
    p.set_defaults(func=_cmd_conjecture)

    p = sub.add_parser("appendix", help="worked 2x4 counterexample, verified end to end")
    common(p)
    p.set_defaults(func=_cmd_appendix)

    p = sub.add_parser("generate", help="seeded fixture families")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--size", type=int, default=5, help="node count or column count")
    p.add_argument("--rows", type=int, default=3, help="row count (random-rational)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    common(p)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("diameter", help="polytope graph diameter against the kappa bound")
    p.add_argument("--input", required=True, help="LP JSON")
    common(p)
    p.set_defaults(func=_cmd_diameter)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AuditFailure as exc:
        print(f"finding: {exc}", file=sys.stderr)
        return 1
    except _INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except CircuitKitError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
