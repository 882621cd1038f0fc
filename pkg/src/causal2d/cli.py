"""Command-line client.

Thin by design: every subcommand loads its inputs into the service
request models, runs the corresponding service operation (in-process by
default, or against a running server with ``--server URL``), writes the
JSON report and maps the outcome to an exit code:

    0   verdict positive (causal iso / separable / weakly zero) or data written
    1   verdict negative
    2   input or configuration error

Reports have a stable key order; ``--deterministic`` omits the
timestamp so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from .config import default_seed
from .errors import Causal2DError
from .fieldio import field_to_dict, load_field, write_json_atomic
from .service import ops
from .service.models import (
    CheckMapRequest,
    ConfigModel,
    FieldModel,
    GenFieldRequest,
    MapModel,
    PairRequest,
    SeparateRequest,
    TestFnModel,
    WeakDerivRequest,
)

_ENDPOINTS = {
    "check-map": "/v1/check-map",
    "separate": "/v1/separate",
    "weak-deriv": "/v1/weak-deriv",
    "gen-field": "/v1/gen-field",
    "pair": "/v1/pair",
}


def _parse_probes(text: str) -> tuple[int, int]:
    spec = text.split(":", 1)[-1]  # accept both "5x5" and "lattice:5x5"
    try:
        a, b = spec.lower().split("x")
        return int(a), int(b)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad probe spec {text!r}; want e.g. lattice:5x5") from exc


def _parse_mollifier(text: str) -> tuple[float, float]:
    try:
        c, r = text.split(":")
        return float(c), float(r)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad mollifier spec {text!r}; want center:radius") from exc


def _parse_rect(text: str) -> list[float]:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad rect {text!r}") from exc
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("rect needs u_min,u_max,v_min,v_max")
    return parts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causal2d",
        description="Weak-derivative calculus and causal-isomorphism checks "
        "on null-coordinate rectangles.",
    )
    parser.add_argument("--server", metavar="URL", default=None,
                        help="send the request to a running causal2d service")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, default=256, help="grid nodes per axis")
    common.add_argument("--probes", type=_parse_probes, default=(5, 5),
                        metavar="lattice:NxM", help="probe lattice shape")
    common.add_argument("--tol", type=float, default=1e-5, help="weakly-zero tolerance")
    common.add_argument("--seed", type=int, default=None,
                        help="seed (default: CAUSAL2D_SEED or 42)")
    common.add_argument("--oracle-pairs", type=int, default=10_000,
                        help="event pairs drawn by the order oracle")
    common.add_argument("--mollifier", type=_parse_mollifier, default=None,
                        metavar="CENTER:RADIUS", help="mollifier placement override")
    common.add_argument("--report", metavar="PATH", default=None,
                        help="write the JSON report here (default: stdout)")
    common.add_argument("--deterministic", action="store_true",
                        help="omit the timestamp so reports are byte-identical")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-map", parents=[common],
                       help="decide whether a plane map is a causal isomorphism")
    p.add_argument("map_file")

    p = sub.add_parser("separate", parents=[common],
                       help="split a field into alpha(u) + beta(v)")
    p.add_argument("field_file")
    p.add_argument("-o", "--output", nargs=2, metavar=("ALPHA_CSV", "BETA_CSV"),
                   default=None, help="write the two 1-D parts as CSV")

    p = sub.add_parser("weak-deriv", parents=[common],
                       help="probe a weak derivative of a field for vanishing")
    p.add_argument("field_file")
    p.add_argument("--order", choices=["u", "v", "uv"], required=True)

    p = sub.add_parser("gen-field", parents=[common],
                       help="sample an expression in (u, v) into a field file")
    p.add_argument("expr")
    p.add_argument("--rect", type=_parse_rect, default=[-1.0, 1.0, -1.0, 1.0])
    p.add_argument("-o", "--output", required=True, metavar="FIELD_JSON")

    p = sub.add_parser("pair", parents=[common],
                       help="pair a field against a test function")
    p.add_argument("field_file")
    p.add_argument("--testfn", required=True,
                   help="inline JSON spec or a path to one")

    return parser


def _config_model(args) -> ConfigModel:
    mc, mr = (args.mollifier if args.mollifier else (None, None))
    return ConfigModel(
        grid=args.grid,
        probes=tuple(args.probes),
        tol=args.tol,
        oracle_pairs=args.oracle_pairs,
        seed=args.seed if args.seed is not None else default_seed(),
        mollifier_center=mc,
        mollifier_radius=mr,
    )


def _field_model(path: str) -> FieldModel:
    return FieldModel(**field_to_dict(load_field(path)))


def _load_json_arg(text: str) -> dict:
    if text.lstrip().startswith("{"):
        return json.loads(text)
    return json.loads(Path(text).read_text(encoding="utf-8"))


def _run(args, request, kind: str):
    if args.server:
        import httpx

        reply = httpx.post(args.server.rstrip("/") + _ENDPOINTS[kind],
                           json=request.model_dump(), timeout=600.0)
        if reply.status_code != 200:
            raise Causal2DError(f"server error {reply.status_code}: {reply.text}")
        return reply.json()
    runner = {
        "check-map": ops.run_check_map,
        "separate": ops.run_separate,
        "weak-deriv": ops.run_weak_deriv,
        "gen-field": ops.run_gen_field,
        "pair": ops.run_pair,
    }[kind]
    return runner(request).model_dump()


def _emit_report(args, payload: dict) -> None:
    report = {"command": args.command}
    report.update(payload)
    if not args.deterministic:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    if args.report:
        write_json_atomic(report, args.report)
    else:
        print(json.dumps(report, indent=2))


def _write_series_csv(series: dict, path: str) -> None:
    lines = [f"{x!r},{y!r}" for x, y in zip(series["x"], series["y"])]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check-map":
            raw = json.loads(Path(args.map_file).read_text(encoding="utf-8"))
            req = CheckMapRequest(map=MapModel(**raw), config=_config_model(args))
            payload = _run(args, req, "check-map")
            _emit_report(args, payload)
            return 0 if payload["is_causal_iso"] else 1

        if args.command == "separate":
            req = SeparateRequest(field=_field_model(args.field_file),
                                  config=_config_model(args))
            payload = _run(args, req, "separate")
            if args.output:
                _write_series_csv(payload["alpha"], args.output[0])
                _write_series_csv(payload["beta"], args.output[1])
            _emit_report(args, payload)
            return 0 if payload["separable"] else 1

        if args.command == "weak-deriv":
            req = WeakDerivRequest(field=_field_model(args.field_file),
                                   order=args.order, config=_config_model(args))
            payload = _run(args, req, "weak-deriv")
            _emit_report(args, payload)
            return 0 if payload["verdict"] == "zero" else 1

        if args.command == "gen-field":
            req = GenFieldRequest(expr=args.expr, rect=args.rect,
                                  resolution=args.grid)
            payload = _run(args, req, "gen-field")
            write_json_atomic(payload["field"], args.output)
            return 0

        if args.command == "pair":
            req = PairRequest(field=_field_model(args.field_file),
                              testfn=TestFnModel(**_load_json_arg(args.testfn)),
                              config=_config_model(args))
            payload = _run(args, req, "pair")
            _emit_report(args, payload)
            return 0

        raise AssertionError(f"unhandled command {args.command}")
    except (Causal2DError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"causal2d: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
