"""Command-line client for the analysis service.

The CLI builds a request from its flags, posts it to the service, and
writes the returned artifact verbatim.  Without ``--server`` it talks
to an in-process instance of the application (no network involved), so
single-shot runs are self-contained; with ``--server URL`` the same
requests go to a remote instance.

Exit codes: 0 success, 1 input or validation error, 2 numerical or
transport failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; this CLI reserves 2 for
    # numerical failures, so flag errors are remapped to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _floats(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _velocity(text: str):
    if text == "X":
        return "X"
    return _floats(text)


def _range(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected lo:hi:step, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected numeric lo:hi:step, got {text!r}")
    return lo, hi, step


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="kccflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("system", help="system definition file (JSON)")
        p.add_argument("--out", help="write the artifact to this file instead of stdout")
        p.add_argument("--server", help="URL of a running service (default: in-process)")

    p = sub.add_parser("analyze", help="full geometric report at one state")
    common(p)
    p.add_argument("--point", type=_floats, required=True, help="evaluation point x1,..,xn")
    p.add_argument(
        "--velocity",
        type=_velocity,
        default=None,
        help="velocity y1,..,yn or X (default: on-flow, y = X(x))",
    )
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("stability", help="equilibrium stability table")
    common(p)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("integrate", help="trajectory CSV")
    common(p)
    p.add_argument("--x0", type=_floats, required=True)
    p.add_argument("--h", type=float, required=True, help="step size")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--mode", choices=("flow", "el"), default="flow")
    p.add_argument("--y0", type=_velocity, default=None, help="el-mode start velocity or X")
    p.add_argument("--residual", action="store_true", help="append the action-residual column")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("surface", help="constant-energy surface mesh")
    common(p)
    p.add_argument("--rho", type=float, required=True, help="energy level (>= 0)")
    p.add_argument("--resolution", type=int, default=16)
    p.add_argument("--format", choices=("obj", "csv"), default="obj")
    p.add_argument("--axial-extent", type=float, default=10.0, dest="axial_extent")
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("sweep", help="coefficient sweep stability grid")
    common(p)
    p.add_argument("--param", required=True, help="coefficient path, a.i.j or b.i")
    p.add_argument("--range", type=_range, required=True, dest="sweep_range", help="lo:hi:step")
    p.add_argument("--param2", default=None)
    p.add_argument("--range2", type=_range, default=None, dest="sweep_range2")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for grid cells")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


class _InputError(Exception):
    pass


class _ServiceError(Exception):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


def _load_system(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _InputError(f"cannot read system file: {exc}")
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _InputError(f"system file is not valid JSON: {exc}")
    if not isinstance(spec, dict):
        raise _InputError("system file must contain a JSON object")
    return spec


def _open_client(server: str | None):
    import httpx

    if server:
        return httpx.Client(base_url=server, timeout=120.0)
    # in-process transport: same application object the server would run;
    # the import warns about the httpx/starlette pairing, which is noise here
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app())


def _detail_text(response) -> str:
    try:
        detail = response.json().get("detail")
    except ValueError:
        return response.text.strip()
    if isinstance(detail, dict):
        return str(detail.get("message", detail))
    if isinstance(detail, list):  # schema validation report
        parts = []
        for item in detail:
            loc = ".".join(str(p) for p in item.get("loc", []) if p != "body")
            parts.append(f"{loc}: {item.get('msg')}")
        return "; ".join(parts)
    return str(detail)


def _post(args, path: str, payload: dict):
    import httpx

    client = _open_client(args.server)
    try:
        try:
            response = client.post(path, json=payload)
        except httpx.HTTPError as exc:
            raise _ServiceError(f"service unreachable: {exc}", 2)
    finally:
        client.close()
    if response.status_code == 200:
        return response
    detail = _detail_text(response)
    if response.status_code >= 500:
        raise _ServiceError(f"numerical failure: {detail}", 2)
    raise _ServiceError(detail, 1)


def _emit(args, data: bytes) -> None:
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))


def cmd_analyze(args) -> int:
    payload = {"system": _load_system(args.system), "point": args.point}
    if args.velocity is not None and args.velocity != "X":
        payload["velocity"] = args.velocity
    response = _post(args, "/analyze", payload)
    _emit(args, response.content + b"\n")
    return 0


def cmd_stability(args) -> int:
    response = _post(args, "/stability", {"system": _load_system(args.system)})
    _emit(args, response.json()["csv"].encode("utf-8"))
    return 0


def cmd_integrate(args) -> int:
    payload = {
        "system": _load_system(args.system),
        "x0": args.x0,
        "h": args.h,
        "steps": args.steps,
        "mode": args.mode,
        "residual": args.residual,
    }
    if args.y0 is not None:
        payload["y0"] = args.y0
    response = _post(args, "/integrate", payload)
    _emit(args, response.json()["csv"].encode("utf-8"))
    return 0


def cmd_surface(args) -> int:
    payload = {
        "system": _load_system(args.system),
        "rho": args.rho,
        "resolution": args.resolution,
        "format": args.format,
        "axial_extent": args.axial_extent,
    }
    response = _post(args, "/surface", payload)
    body = response.json()
    print(f"classification: {body['classification']}", file=sys.stderr)
    _emit(args, body["content"].encode("utf-8"))
    return 0


def cmd_sweep(args) -> int:
    axes = [{"path": args.param, "lo": args.sweep_range[0], "hi": args.sweep_range[1], "step": args.sweep_range[2]}]
    if (args.param2 is None) != (args.sweep_range2 is None):
        raise _InputError("--param2 and --range2 must be given together")
    if args.param2 is not None:
        lo, hi, step = args.sweep_range2
        axes.append({"path": args.param2, "lo": lo, "hi": hi, "step": step})
    payload = {"system": _load_system(args.system), "axes": axes, "workers": args.jobs}
    response = _post(args, "/sweep", payload)
    _emit(args, response.json()["csv"].encode("utf-8"))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("kccflow.service.app:app", host=args.host, port=args.port)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"kccflow: error: {exc}", file=sys.stderr)
        return 1
    except _ServiceError as exc:
        print(f"kccflow: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
