"""Command-line front end.

Every subcommand renders a JSON document (the canonical output); text output
is a flat rendering of the same dict, and sweep CSV rows carry the fixed
column set r,d,prime,seed,cd,rank,target,verdict,elapsed_ms.  Exit codes:
0 success, 1 verification/certification failure, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import __version__, constructions, dominance, graded, mpoly, polymat
from .exactlin import DEFAULT_PRIME, PrimeField
from .rng import FieldRng


@dataclass
class RunConfig:
    prime: int = DEFAULT_PRIME
    seed: int = 0
    retries: int = 3
    max_certificate_degree: int = 40
    max_interpolation_points: int | None = None
    workers: int = 1
    output: str | None = None
    fmt: str = "json"

    def field(self) -> PrimeField:
        return PrimeField(self.prime)


class InputError(ValueError):
    pass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"environment variable {name}={raw!r} is not an integer") from exc


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--prime", type=int, default=None, help="field modulus (odd prime)")
    sub.add_argument("--seed", type=int, default=0, help="root seed for all randomness")
    sub.add_argument("--retries", type=int, default=3, help="independent samples before giving up")
    sub.add_argument("--workers", type=int, default=None, help="worker pool size for sweeps")
    sub.add_argument("--output", type=str, default=None, help="write result to this path")
    sub.add_argument(
        "--format", dest="fmt", choices=("json", "csv", "text"), default="json"
    )
    sub.add_argument(
        "--work-limit-degree",
        type=int,
        default=40,
        help="largest graded piece degree certificates may compute",
    )
    sub.add_argument(
        "--max-interpolation-points",
        type=int,
        default=None,
        help="hard cap on interpolation sample points",
    )


def _config(args: argparse.Namespace) -> RunConfig:
    prime = args.prime if args.prime is not None else _env_int("DETPF_PRIME", DEFAULT_PRIME)
    workers = args.workers if getattr(args, "workers", None) is not None else _env_int(
        "DETPF_WORKERS", 1
    )
    try:
        PrimeField(prime)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return RunConfig(
        prime=prime,
        seed=args.seed,
        retries=args.retries,
        max_certificate_degree=getattr(args, "work_limit_degree", 40),
        max_interpolation_points=getattr(args, "max_interpolation_points", None),
        workers=workers,
        output=args.output,
        fmt=args.fmt,
    )


def _render_text(doc, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(doc, dict):
        lines = []
        for k, v in doc.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(doc, list):
        return "\n".join(_render_text(v, indent) for v in doc)
    return f"{pad}{doc}"


def _emit(cfg: RunConfig, doc, csv_lines: list[str] | None = None) -> None:
    if cfg.fmt == "json":
        text = json.dumps(doc, indent=2, sort_keys=True)
    elif cfg.fmt == "csv":
        if csv_lines is None:
            raise InputError("csv output is only available for certificate sweeps")
        text = "\n".join(csv_lines)
    else:
        text = _render_text(doc)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _write_file(path: str | None, text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


# ---- subcommand handlers ------------------------------------------------------


def _cmd_formulas(args: argparse.Namespace) -> int:
    cfg = _config(args)
    table = dominance.formula_table(args.ambient, args.degree)
    _emit(cfg, table.to_dict())
    return 0


def _cmd_dominance(args: argparse.Namespace) -> int:
    cfg = _config(args)
    ok, cert = dominance.is_dominant(
        args.ambient,
        args.degree,
        prime=cfg.prime,
        seed=cfg.seed,
        retries=cfg.retries,
        max_points=cfg.max_interpolation_points,
    )
    _emit(
        cfg,
        cert.to_dict(),
        csv_lines=[cert.csv_header(), cert.csv_row()],
    )
    if args.expect_dominant and not ok:
        return 1
    return 0


def _cmd_dominance_sweep(args: argparse.Namespace) -> int:
    cfg = _config(args)
    certs = dominance.dominance_sweep(
        args.ambient,
        args.max_degree,
        prime=cfg.prime,
        seed=cfg.seed,
        retries=cfg.retries,
        min_degree=args.min_degree,
        workers=cfg.workers,
        max_points=cfg.max_interpolation_points,
    )
    doc = [c.to_dict() for c in certs]
    csv_lines = [dominance.DominanceCertificate.csv_header()] + [c.csv_row() for c in certs]
    _emit(cfg, doc, csv_lines=csv_lines)
    return 0


def _cmd_lower_bound(args: argparse.Namespace) -> int:
    cfg = _config(args)
    threshold, trail = dominance.lower_bound_for_dominant_degree(
        args.ambient,
        prime=cfg.prime,
        seed=cfg.seed,
        retries=cfg.retries,
        max_points=cfg.max_interpolation_points,
    )
    doc = {
        "ambient": args.ambient,
        "threshold": threshold,
        "trail": [c.to_dict() for c in trail],
    }
    csv_lines = [dominance.DominanceCertificate.csv_header()] + [c.csv_row() for c in trail]
    _emit(cfg, doc, csv_lines=csv_lines)
    if args.expect is not None and threshold != args.expect:
        return 1
    return 0


def _cmd_construct(args: argparse.Namespace) -> int:
    cfg = _config(args)
    field = cfg.field()
    rng = FieldRng(cfg.seed, "construct", args.kind)
    if args.kind == "fermat":
        built = constructions.fermat_matrix(field, args.ambient, args.degree)
        matrix = built.matrix
        if built.footnote_variant:
            print("# footnote variant: char divides degree", file=sys.stderr)
    elif args.kind == "cyclic":
        f_forms = mpoly.parse_forms(_read_file(args.f_forms), field)
        g_forms = mpoly.parse_forms(_read_file(args.g_forms), field)
        matrix = constructions.cyclic_matrix(f_forms, g_forms)
    elif args.kind == "block":
        inner = polymat.parse_graded_matrix(_read_file(args.matrix), field)
        matrix = constructions.block_skew_from(inner)
    elif args.kind == "theta-shape":
        matrix = constructions.theta_shape_random(field, args.degree, rng)
    elif args.kind == "pullback":
        inner = polymat.parse_graded_matrix(_read_file(args.matrix), field)
        matrix = constructions.pullback_squares(inner)
    elif args.kind == "random":
        shape = constructions.ResolutionShape(
            tuple(int(v) for v in args.rows.split(",")),
            tuple(int(v) for v in args.cols.split(",")),
            args.symmetry,
        )
        matrix = constructions.random_graded_matrix(field, args.nvars, shape, rng)
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown construction {args.kind!r}")
    _write_file(args.output, matrix.to_text())
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    cfg = _config(args)
    field = cfg.field()
    matrix = polymat.parse_graded_matrix(_read_file(args.matrix), field)
    form = mpoly.parse_form(_read_file(args.form), field)
    result = polymat.verify_representation(matrix, form, args.kind, seed=cfg.seed)
    _emit(cfg, {"ok": result.ok, "scalar": result.scalar, "kind": args.kind})
    return 0 if result.ok else 1


def _cmd_hilbert(args: argparse.Namespace) -> int:
    cfg = _config(args)
    field = cfg.field()
    matrix = polymat.parse_graded_matrix(_read_file(args.matrix), field)
    try:
        lo, hi = args.degrees.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError as exc:
        raise InputError(f"--degrees expects J0..J1, got {args.degrees!r}") from exc
    table = {str(j): graded.coker_hilbert(matrix, j) for j in range(lo, hi + 1)}
    _emit(cfg, {"hilbert": table})
    return 0


def _cmd_gorenstein(args: argparse.Namespace) -> int:
    cfg = _config(args)
    field = cfg.field()
    points = graded.parse_point_set(_read_file(args.points), field)
    report = graded.gorenstein_check(points, work_limit=cfg.max_certificate_degree)
    _emit(
        cfg,
        {
            "degree": report.degree,
            "hilbert": list(report.hilbert),
            "index": report.index,
            "symmetry_ok": report.symmetry_ok,
            "cayley_bacharach_ok": report.cayley_bacharach_ok,
            "passed": report.passed,
        },
    )
    return 0


def _cmd_smooth(args: argparse.Namespace) -> int:
    cfg = _config(args)
    field = cfg.field()
    form = mpoly.parse_form(_read_file(args.form), field)
    cert = graded.smoothness_certificate(
        form, max_certificate_degree=cfg.max_certificate_degree
    )
    _emit(
        cfg,
        {
            "verdict": cert.verdict,
            "certificate_degree": cert.certificate_degree,
            "achieved_dim": cert.achieved_dim,
            "full_dim": cert.full_dim,
            "witness": list(cert.witness) if cert.witness else None,
        },
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detpf",
        description="determinantal and pfaffian representations of hypersurfaces over GF(p)",
    )
    parser.add_argument("--version", action="version", version=f"detpf {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("formulas", help="degree/genus/dimension formula table")
    sub.add_argument("--ambient", type=int, required=True)
    sub.add_argument("--degree", type=int, required=True)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_formulas)

    sub = subs.add_parser("dominance", help="one pfaffian dominance certificate")
    sub.add_argument("--ambient", type=int, required=True)
    sub.add_argument("--degree", type=int, required=True)
    sub.add_argument(
        "--expect-dominant",
        action="store_true",
        help="exit 1 unless the certificate proves dominance",
    )
    _add_common(sub)
    sub.set_defaults(handler=_cmd_dominance)

    sub = subs.add_parser("dominance-sweep", help="certificates for a degree range")
    sub.add_argument("--ambient", type=int, required=True)
    sub.add_argument("--max-degree", type=int, required=True)
    sub.add_argument("--min-degree", type=int, default=3)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_dominance_sweep)

    sub = subs.add_parser("lower-bound", help="largest dominant degree for an ambient")
    sub.add_argument("--ambient", type=int, required=True)
    sub.add_argument("--expect", type=int, default=None, help="exit 1 unless the threshold matches")
    _add_common(sub)
    sub.set_defaults(handler=_cmd_lower_bound)

    sub = subs.add_parser("construct", help="emit a constructed matrix file")
    sub.add_argument(
        "kind",
        choices=("fermat", "cyclic", "block", "theta-shape", "pullback", "random"),
    )
    sub.add_argument("--ambient", type=int, default=2)
    sub.add_argument("--degree", type=int, default=3)
    sub.add_argument("--matrix", type=str, help="input matrix file (block, pullback)")
    sub.add_argument("--f-forms", type=str, help="diagonal forms file (cyclic)")
    sub.add_argument("--g-forms", type=str, help="cycle forms file (cyclic)")
    sub.add_argument("--rows", type=str, default="0,0,0", help="row twists (random)")
    sub.add_argument(
        "--cols",
        type=str,
        default="-1,-1,-1",
        help="column twists (random); use --cols=-1,-1,-1 for negative values",
    )
    sub.add_argument("--symmetry", choices=("general", "symmetric", "skew"), default="general")
    sub.add_argument("--nvars", type=int, default=4)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_construct)

    sub = subs.add_parser("verify", help="check det/pf of a matrix against a form")
    sub.add_argument("--matrix", type=str, required=True)
    sub.add_argument("--form", type=str, required=True)
    sub.add_argument("--kind", choices=("det", "pf"), required=True)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_verify)

    sub = subs.add_parser("hilbert", help="Hilbert function of a presented cokernel")
    sub.add_argument("--matrix", type=str, required=True)
    sub.add_argument("--degrees", type=str, required=True, help="range J0..J1")
    _add_common(sub)
    sub.set_defaults(handler=_cmd_hilbert)

    sub = subs.add_parser("gorenstein", help="arithmetically Gorenstein point-set check")
    sub.add_argument("--points", type=str, required=True)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_gorenstein)

    sub = subs.add_parser("smooth", help="smoothness certificate for a form")
    sub.add_argument("--form", type=str, required=True)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_smooth)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (
        InputError,
        mpoly.FormParseError,
        polymat.MatrixParseError,
        graded.PointSetParseError,
        constructions.DegreeInconsistency,
        constructions.UnsupportedAmbient,
        graded.DuplicatePoint,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
