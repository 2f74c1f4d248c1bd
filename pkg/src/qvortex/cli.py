"""Command-line front end; a thin client of the FastAPI service.

Subcommands: field | orbit | images | limits | validate | serve.  Without
``--server`` the requests run against an in-process instance of the app
(no network involved); with ``--server URL`` they go to a remote one.

Configuration comes from ``--config FILE`` (a JSON-serialized RunConfig)
with individual flags overriding file values.  Outputs are deterministic:
floats are written in shortest round-trip form, grid/summation orders are
fixed, so identical configurations produce byte-identical artifacts.

Exit codes: 0 success, 1 domain/validation/I-O error, 2 convergence error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx
from pydantic import ValidationError

from .service import schemas

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_CONVERGENCE = 2

_TIMEOUT = 600.0


class ServiceClient:
    """POSTs payloads either to a remote server or the in-process app."""

    def __init__(self, server: str | None = None):
        self.server = server

    def post(self, path: str, payload: dict) -> httpx.Response:
        if self.server:
            with httpx.Client(base_url=self.server, timeout=_TIMEOUT) as client:
                return client.post(path, json=payload)
        from .service.app import app

        async def _call() -> httpx.Response:
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(transport=transport, timeout=_TIMEOUT,
                                         base_url="http://qvortex.internal") as client:
                return await client.post(path, json=payload)

        return asyncio.run(_call())


def _fmt(x: float) -> str:
    # shortest decimal that round-trips the double, locale independent
    return repr(float(x))


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _parse_vortex(text: str) -> schemas.VortexSpec:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"--vortex expects 'x,y,kappa', got {text!r}")
    x, y, kappa = (float(p) for p in parts)
    return schemas.VortexSpec(x=x, y=y, kappa=kappa)


def _add_common(parser: argparse.ArgumentParser, with_system: bool = True) -> None:
    parser.add_argument("--config", type=Path, help="JSON config file (RunConfig schema)")
    parser.add_argument("--server", help="base URL of a running service; default runs in-process")
    parser.add_argument("--out", type=Path, help="output artifact path")
    parser.add_argument("--dump-config", type=Path,
                        help="write the merged effective config to this path")
    if with_system:
        parser.add_argument("--r1", type=float, help="inner radius")
        parser.add_argument("--r2", type=float, help="outer radius")
        parser.add_argument("--vortex", action="append", default=None, metavar="X,Y,KAPPA",
                            help="vortex spec; repeat for several vortices "
                                 "(use --vortex=-1,0,1 for negative x)")
    parser.add_argument("--max-terms", type=int, help="series/product term budget")
    parser.add_argument("--abs-tol", type=float, help="series tail tolerance (0 = exact term count)")
    parser.add_argument("--image-pairs", type=int, help="image-lattice shells per direction")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qvortex",
        description="Point-vortex flow in a circular annulus",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", help="sample velocity and stream function on a polar grid")
    _add_common(p)
    p.add_argument("--n-r", type=int, help="radial grid cells")
    p.add_argument("--n-theta", type=int, help="angular grid cells")
    p.add_argument("--representation", choices=("laurent", "images", "qlog", "theta"))
    p.add_argument("--laurent-order", type=int, help="series order of the Laurent representation")

    p = sub.add_parser("orbit", help="integrate vortex trajectories")
    _add_common(p)
    p.add_argument("--t-end", type=float, help="integration time span")
    p.add_argument("--dt", type=float, help="fixed integration step")
    p.add_argument("--summary", type=Path, help="path of the JSON summary artifact")

    p = sub.add_parser("images", help="emit the image cascade of one vortex as JSON")
    _add_common(p)
    p.add_argument("--depth", type=int, help="cascade generations per family")

    p = sub.add_parser("limits", help="compare the annulus flow with both one-wall limits")
    _add_common(p, with_system=False)
    p.add_argument("--case", choices=("cylinder", "disk", "both"))
    p.add_argument("--q-values", help="comma-separated q sweep, e.g. 1e3,1e4,1e5,1e6")
    p.add_argument("--n-points", type=int, help="sample points per comparison")

    p = sub.add_parser("validate", help="cross-check the three velocity representations")
    _add_common(p)
    p.add_argument("--n-samples", type=int, help="interior sample points")
    p.add_argument("--samples-per-circle", type=int, help="boundary residual samples per wall")
    p.add_argument("--laurent-order", type=int)
    p.add_argument("--tol", type=float, help="pass/fail tolerance")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _load_config(args: argparse.Namespace) -> schemas.RunConfig:
    data: dict = {}
    if getattr(args, "config", None):
        data = json.loads(Path(args.config).read_text(encoding="utf-8"))
    cfg = schemas.RunConfig.model_validate(data)

    if getattr(args, "r1", None) is not None or getattr(args, "r2", None) is not None:
        prev = cfg.geometry
        r1 = args.r1 if args.r1 is not None else (prev.r1 if prev else None)
        r2 = args.r2 if args.r2 is not None else (prev.r2 if prev else None)
        if r1 is None or r2 is None:
            raise ValueError("geometry needs both --r1 and --r2 (or a config file)")
        cfg.geometry = schemas.GeometrySpec(r1=r1, r2=r2)
    if getattr(args, "vortex", None):
        cfg.vortices = [_parse_vortex(s) for s in args.vortex]

    trunc = cfg.truncation.model_dump()
    for flag, key in (("max_terms", "max_terms"), ("abs_tol", "abs_tol"),
                      ("image_pairs", "image_pairs")):
        val = getattr(args, flag, None)
        if val is not None:
            trunc[key] = val
    cfg.truncation = schemas.TruncationSpec(**trunc)

    def _override(section, mapping):
        data = section.model_dump()
        for flag, key in mapping:
            val = getattr(args, flag, None)
            if val is not None:
                data[key] = val
        return type(section)(**data)

    if args.command == "field":
        cfg.field = _override(cfg.field, (("n_r", "n_r"), ("n_theta", "n_theta"),
                                          ("representation", "representation"),
                                          ("laurent_order", "laurent_order")))
    elif args.command == "orbit":
        cfg.orbit = _override(cfg.orbit, (("t_end", "t_end"), ("dt", "dt")))
    elif args.command == "images":
        cfg.images = _override(cfg.images, (("depth", "depth"),))
    elif args.command == "limits":
        mapping = (("case", "case"), ("n_points", "n_points"))
        cfg.limits = _override(cfg.limits, mapping)
        if getattr(args, "q_values", None):
            cfg.limits.q_values = [float(s) for s in args.q_values.split(",")]
    elif args.command == "validate":
        cfg.validate_opts = _override(
            cfg.validate_opts,
            (("n_samples", "n_samples"), ("samples_per_circle", "samples_per_circle"),
             ("laurent_order", "laurent_order"), ("tol", "tol")))
    return cfg


def _require_system(cfg: schemas.RunConfig) -> tuple[schemas.GeometrySpec, list[schemas.VortexSpec]]:
    if cfg.geometry is None:
        raise ValueError("no geometry given: pass --r1/--r2 or a config file")
    if not cfg.vortices:
        raise ValueError("no vortices given: pass --vortex x,y,kappa or a config file")
    return cfg.geometry, cfg.vortices


def _print_response_error(body: dict | None, status: int) -> int:
    if body is None:
        print(f"error: service returned status {status} with no JSON body", file=sys.stderr)
        return EXIT_DOMAIN
    err = body.get("error")
    if err:
        print(f"error ({err['kind']}): {err['message']}", file=sys.stderr)
        return EXIT_CONVERGENCE if err["kind"] == "convergence" else EXIT_DOMAIN
    detail = body.get("detail")
    if isinstance(detail, list):
        for item in detail:
            loc = ".".join(str(p) for p in item.get("loc", ()) if p != "body")
            print(f"error (validation): {loc}: {item.get('msg')}", file=sys.stderr)
        return EXIT_DOMAIN
    print(f"error: service returned status {status}: {body}", file=sys.stderr)
    return EXIT_DOMAIN


def _post(client: ServiceClient, path: str, payload_model) -> tuple[int, dict | None]:
    resp = client.post(path, payload_model.model_dump(mode="json"))
    if resp.status_code == 200:
        return EXIT_OK, resp.json()
    try:
        body = resp.json()
    except ValueError:
        body = None
    return _print_response_error(body, resp.status_code), None


def _run_field(cfg: schemas.RunConfig, args, client: ServiceClient) -> int:
    geometry, vortices = _require_system(cfg)
    req = schemas.FieldRequest(
        geometry=geometry, vortices=vortices,
        grid=schemas.GridSpec(n_r=cfg.field.n_r, n_theta=cfg.field.n_theta),
        representation=cfg.field.representation,
        truncation=cfg.truncation, laurent_order=cfg.field.laurent_order,
    )
    code, body = _post(client, "/field", req)
    if code != EXIT_OK:
        return code
    out = args.out or Path("field.csv")
    lines = ["# " + json.dumps(body["metadata"], sort_keys=True)]
    lines.append("x,y,u,v,psi")
    for p in body["points"]:
        lines.append(",".join(_fmt(p[c]) for c in ("x", "y", "u", "v", "psi")))
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    meta = body["metadata"]
    print(f"field: {len(body['points'])} points -> {out}")
    print(f"boundary residuals: inner {_fmt(meta['residual_inner'])}, "
          f"outer {_fmt(meta['residual_outer'])}")
    return EXIT_OK


def _run_orbit(cfg: schemas.RunConfig, args, client: ServiceClient) -> int:
    geometry, vortices = _require_system(cfg)
    req = schemas.OrbitRequest(geometry=geometry, vortices=vortices,
                               t_end=cfg.orbit.t_end, dt=cfg.orbit.dt,
                               truncation=cfg.truncation)
    code, body = _post(client, "/orbit", req)
    if code != EXIT_OK:
        return code
    out = args.out or Path("orbit.csv")
    n_vortices = len(vortices)
    header = "t," + ",".join(f"x{k+1},y{k+1}" for k in range(n_vortices))
    lines = [header]
    for t, row in zip(body["times"], body["positions"]):
        cells = [_fmt(t)]
        for xy in row:
            cells.extend((_fmt(xy[0]), _fmt(xy[1])))
        lines.append(",".join(cells))
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    summary = body["summary"]
    summary_path = args.summary or out.with_suffix(".summary.json")
    summary_path.write_text(_json_text(summary), encoding="utf-8")
    print(f"orbit: {summary['n_steps']} steps -> {out} (summary -> {summary_path})")
    if summary.get("omega") is not None:
        print(f"omega = {_fmt(summary['omega'])} "
              f"(omega1 = {_fmt(summary['omega1'])}, omega2 = {_fmt(summary['omega2'])})")
    if summary.get("aborted_reason"):
        print(f"integration aborted: {summary['aborted_reason']}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def _run_images(cfg: schemas.RunConfig, args, client: ServiceClient) -> int:
    geometry, vortices = _require_system(cfg)
    if len(vortices) != 1:
        print("error: the images command takes exactly one --vortex", file=sys.stderr)
        return EXIT_DOMAIN
    req = schemas.ImagesRequest(geometry=geometry, vortex=vortices[0],
                                depth=cfg.images.depth)
    code, body = _post(client, "/images", req)
    if code != EXIT_OK:
        return code
    text = _json_text(body["images"])
    if args.out:
        args.out.write_text(text, encoding="utf-8")
        print(f"images: {len(body['images'])} entries -> {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _run_limits(cfg: schemas.RunConfig, args, client: ServiceClient) -> int:
    req = schemas.LimitsRequest(case=cfg.limits.case, q_values=cfg.limits.q_values,
                                n_points=cfg.limits.n_points,
                                truncation=cfg.truncation)
    code, body = _post(client, "/limits", req)
    if code != EXIT_OK:
        return code
    print(f"{'case':<10}{'q':>12}  {'max rel err':>14}  {'omega rel err':>14}")
    for row in body["rows"]:
        print(f"{row['case']:<10}{row['q']:>12g}  {row['max_rel_err']:>14.6e}  "
              f"{row['omega_rel_err']:>14.6e}")
    print(f"error decreases monotonically with q: {body['monotone']}")
    if args.out:
        args.out.write_text(_json_text(body), encoding="utf-8")
    return EXIT_OK


def _run_validate(cfg: schemas.RunConfig, args, client: ServiceClient) -> int:
    geometry, vortices = _require_system(cfg)
    opts = cfg.validate_opts
    req = schemas.ValidateRequest(
        geometry=geometry, vortices=vortices, truncation=cfg.truncation,
        n_samples=opts.n_samples, samples_per_circle=opts.samples_per_circle,
        laurent_order=opts.laurent_order, tol=opts.tol,
    )
    code, body = _post(client, "/validate", req)
    if code != EXIT_OK:
        return code
    print(f"laurent vs images : {_fmt(body['discrepancy_laurent_images'])}")
    print(f"images  vs qlog   : {_fmt(body['discrepancy_images_qlog'])}")
    print(f"laurent vs qlog   : {_fmt(body['discrepancy_laurent_qlog'])}")
    print(f"boundary residuals: inner {_fmt(body['residual_inner'])}, "
          f"outer {_fmt(body['residual_outer'])}")
    print(f"tolerance {_fmt(body['tol'])}: {'PASS' if body['passed'] else 'FAIL'}")
    if args.out:
        args.out.write_text(_json_text(body), encoding="utf-8")
    return EXIT_OK if body["passed"] else EXIT_DOMAIN


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed the usage message; keep exit 2 reserved
        # for convergence failures
        return EXIT_DOMAIN if exc.code else EXIT_OK

    if args.command == "serve":
        import uvicorn

        from .service.app import app
        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK

    try:
        cfg = _load_config(args)
    except ValidationError as exc:
        for err in exc.errors():
            loc = ".".join(str(p) for p in err["loc"])
            print(f"config error: {loc}: {err['msg']}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN

    if getattr(args, "dump_config", None):
        args.dump_config.write_text(
            cfg.model_dump_json(indent=2, by_alias=True) + "\n", encoding="utf-8")

    client = ServiceClient(getattr(args, "server", None))
    handlers = {
        "field": _run_field,
        "orbit": _run_orbit,
        "images": _run_images,
        "limits": _run_limits,
        "validate": _run_validate,
    }
    try:
        return handlers[args.command](cfg, args, client)
    except ValidationError as exc:
        for err in exc.errors():
            loc = ".".join(str(p) for p in err["loc"])
            print(f"error (validation): {loc}: {err['msg']}", file=sys.stderr)
        return EXIT_DOMAIN
    except httpx.HTTPError as exc:
        print(f"error (transport): {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error (io): {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
