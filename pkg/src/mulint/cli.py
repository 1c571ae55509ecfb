"""Command-line frontend.

A thin client over the service handlers: each subcommand marshals its
arguments into the corresponding request model, executes it (in-process by
default, against a running server with ``--url``) and prints the response.

Exit codes: 0 success, 1 math-domain error, 2 usage/parse error,
3 quadrature tolerance not met.
"""

from __future__ import annotations

import argparse
import re
import sys

from pydantic import BaseModel, ValidationError

from .errors import (
    DomainError,
    MulintError,
    ParseError,
    ToleranceNotMetError,
)
from .service import handlers
from .service.schemas import (
    IntegrateRequest,
    IntegrateResponse,
    LineIntegrateRequest,
    LineIntegrateResponse,
    RiemannRequest,
    RiemannResponse,
    SampleRequest,
    StarDerivRequest,
    StarDerivResponse,
    VerifyRequest,
    VerifyResponse,
)

_N_RANGE = re.compile(r"^(-?\d+)\.\.(-?\d+)$")

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_TOLERANCE = 3


def _add_common(p: argparse.ArgumentParser, curve: bool = True) -> None:
    p.add_argument("--function", "-f", required=True, help="expression source")
    p.add_argument(
        "--const",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="bind a named constant (value accepts a+bi literals)",
    )
    if curve:
        p.add_argument("--curve", required=True, help="curve specification")
    p.add_argument("--output", help="write result to this path instead of stdout")
    p.add_argument("--url", help="send the request to a running mulint server")


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")


def _add_tols(p: argparse.ArgumentParser) -> None:
    p.add_argument("--abs-tol", type=float, default=1e-10)
    p.add_argument("--rel-tol", type=float, default=1e-10)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mulint",
        description="Multiplicative derivatives and multi-valued multiplicative integrals",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("star-deriv", help="multiplicative derivative at a point")
    _add_common(p, curve=False)
    p.add_argument("--at", required=True, help="evaluation point, e.g. 0.5+0.5i")
    _add_format(p)

    p = sub.add_parser("integrate", help="multiplicative contour integral")
    _add_common(p)
    p.add_argument("--k0", type=int, default=0, help="initial branch index")
    p.add_argument("--n", default="-8..8", metavar="LO..HI", help="index window")
    _add_tols(p)
    _add_format(p)

    p = sub.add_parser("line-integrate", help="multiplicative line integral")
    _add_common(p)
    p.add_argument("--diff", choices=("dx", "dy", "ds"), default="dx")
    _add_tols(p)
    _add_format(p)

    p = sub.add_parser("riemann", help="midpoint integral product approximant")
    _add_common(p)
    p.add_argument("--k0", type=int, default=0)
    p.add_argument("--m", type=int, default=4096, help="partition size")
    _add_format(p)

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument(
        "--suite",
        default="all",
        choices=("all", "ftc", "closed", "concat", "product", "reversal", "power", "line-ftc"),
    )
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", help="write result to this path instead of stdout")
    p.add_argument("--url", help="send the request to a running mulint server")

    p = sub.add_parser("sample", help="CSV of the tracked log along the curve")
    _add_common(p)
    p.add_argument("--k0", type=int, default=0)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _constants(pairs: list[str]) -> dict[str, str]:
    out = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise ParseError(f"bad --const {pair!r}, expected NAME=VALUE")
        out[name] = value
    return out


def _n_window(text: str) -> tuple[int, int]:
    m = _N_RANGE.match(text)
    if not m:
        raise ParseError(f"bad --n {text!r}, expected LO..HI")
    return int(m.group(1)), int(m.group(2))


def _remote(url: str, path: str, req: BaseModel, response_cls: type | None):
    import httpx

    resp = httpx.post(url.rstrip("/") + path, json=req.model_dump(), timeout=300.0)
    if resp.status_code == 200:
        if response_cls is None:
            return resp.text
        return response_cls.model_validate_json(resp.content)
    try:
        payload = resp.json()
    except ValueError:
        raise DomainError(f"server error {resp.status_code}") from None
    kind = payload.get("kind", "domain")
    message = payload.get("message", "server error")
    if kind == "parse":
        raise ParseError(message)
    if kind == "tolerance":
        raise ToleranceNotMetError(message, estimate=0j, est_error=0.0)
    raise DomainError(message)


def _execute(args: argparse.Namespace):
    cmd = args.command
    if cmd == "star-deriv":
        req = StarDerivRequest(
            function=args.function, constants=_constants(args.const), at=args.at
        )
        if args.url:
            return _remote(args.url, "/star-deriv", req, StarDerivResponse)
        return handlers.handle_star_deriv(req)
    if cmd == "integrate":
        n_lo, n_hi = _n_window(args.n)
        req = IntegrateRequest(
            function=args.function,
            constants=_constants(args.const),
            curve=args.curve,
            k0=args.k0,
            n_lo=n_lo,
            n_hi=n_hi,
            abs_tol=args.abs_tol,
            rel_tol=args.rel_tol,
        )
        if args.url:
            return _remote(args.url, "/integrate", req, IntegrateResponse)
        return handlers.handle_integrate(req)
    if cmd == "line-integrate":
        req = LineIntegrateRequest(
            function=args.function,
            constants=_constants(args.const),
            curve=args.curve,
            differential=args.diff,
            abs_tol=args.abs_tol,
            rel_tol=args.rel_tol,
        )
        if args.url:
            return _remote(args.url, "/line-integrate", req, LineIntegrateResponse)
        return handlers.handle_line_integrate(req)
    if cmd == "riemann":
        req = RiemannRequest(
            function=args.function,
            constants=_constants(args.const),
            curve=args.curve,
            k0=args.k0,
            m=args.m,
        )
        if args.url:
            return _remote(args.url, "/riemann", req, RiemannResponse)
        return handlers.handle_riemann(req)
    if cmd == "verify":
        req = VerifyRequest(suite=args.suite, seed=args.seed)
        if args.url:
            return _remote(args.url, "/verify", req, VerifyResponse)
        return handlers.handle_verify(req)
    if cmd == "sample":
        req = SampleRequest(
            function=args.function,
            constants=_constants(args.const),
            curve=args.curve,
            k0=args.k0,
        )
        if args.url:
            return _remote(args.url, "/sample", req, None)
        return handlers.handle_sample(req)
    raise ParseError(f"unknown command {cmd!r}")


def _to_csv(command: str, result: BaseModel) -> str:
    if isinstance(result, IntegrateResponse):
        lines = ["n,re,im"]
        lines += [f"{v.n},{v.re!r},{v.im!r}" for v in result.values]
        return "\n".join(lines) + "\n"
    if isinstance(result, StarDerivResponse):
        return f"re,im\n{result.value.re!r},{result.value.im!r}\n"
    if isinstance(result, RiemannResponse):
        return f"re,im\n{result.value.re!r},{result.value.im!r}\n"
    if isinstance(result, LineIntegrateResponse):
        return f"value\n{result.value!r}\n"
    raise ParseError(f"no CSV rendering for {command}")


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _diagnostic(stage: str, message: str) -> None:
    sys.stderr.write(f"mulint: error [{stage}]: {message}\n")


def _preprocess(argv: list[str]) -> list[str]:
    # argparse mistakes '-2..2' for an option; fold it into '--n=-2..2'
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--n" and i + 1 < len(argv) and _N_RANGE.match(argv[i + 1]):
            out.append(f"--n={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_preprocess(argv))
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK

    try:
        result = _execute(args)
        if isinstance(result, str):  # sample CSV passthrough
            text = result
        elif getattr(args, "format", "json") == "csv":
            text = _to_csv(args.command, result)
        else:
            text = result.model_dump_json(indent=2) + "\n"
        _emit(text, args.output)
        if isinstance(result, VerifyResponse) and not all(
            r.passed for r in result.reports
        ):
            return EXIT_DOMAIN
        return EXIT_OK
    except ValidationError as exc:
        _diagnostic("parse", str(exc))
        return EXIT_USAGE
    except ParseError as exc:
        _diagnostic(exc.stage, str(exc))
        return EXIT_USAGE
    except ToleranceNotMetError as exc:
        _diagnostic(exc.stage, str(exc))
        return EXIT_TOLERANCE
    except MulintError as exc:
        _diagnostic(exc.stage, str(exc))
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
