"""
Command line interface.

Reports go to stdout, log events to stderr. Exit codes: 0 when every check
passes, 1 when a check fails, 2 when the input cannot be used.
"""

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path

import structlog
from pydantic import BaseModel, ValidationError
from sympy import Rational

from .chardata import Character, CharMatrix, validate_characteristic
from .config import get_settings
from .document import InputDocument, dump_document, load_document
from .embed import EmbeddingDescription, assemble_embedding, build_character_set
from .errors import InputDocumentError, InvalidKernelError, QtembedError
from .logs import configure_logging
from .momentangle import quadric_system
from .polytope import cut_codim2_face, enumerate_faces, validate
from .reports import FacesReport, QuadricsReport, Report, ReportBundle, ToricReport
from .toric import check_toric, lattice_points_on_edges, toric_embedding
from .verify import VerifyConfig, run_all

log = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


def parse_character(text: str | None, doc: InputDocument, cm: CharMatrix) -> Character:
    """``trivial``, a comma separated list, or the document's own character."""
    if text is None:
        return doc.get_character() or Character.trivial(cm.k)
    if text.strip().lower() == "trivial":
        return Character.trivial(cm.k)
    try:
        coords = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise InputDocumentError(f"bad character {text!r}") from exc
    if len(coords) != cm.k:
        raise InputDocumentError(f"character needs {cm.k} entries, got {len(coords)}")
    return Character(coords=coords)


def run_validate(doc: InputDocument) -> ReportBundle:
    """Polytope and characteristic matrix checks of a document."""
    P = doc.polytope()
    bundle = ReportBundle(name=doc.name or "document", reports=[validate(P)])
    if not bundle.passed:
        return bundle
    lattice = enumerate_faces(P)
    try:
        cm = doc.char_matrix()
    except InvalidKernelError as exc:
        kernel = Report(check="kernel")
        kernel.fail("invalid_kernel", str(exc))
        bundle.reports.append(validate_characteristic(P, doc.lam(), lattice))
        bundle.reports.append(kernel)
        return bundle
    bundle.reports.append(validate_characteristic(P, cm.lam, lattice, c=cm.c))
    return bundle


def run_faces(doc: InputDocument) -> FacesReport:
    return FacesReport.from_lattice(doc.name, enumerate_faces(doc.polytope()))


def run_quadrics(doc: InputDocument) -> QuadricsReport:
    system = quadric_system(doc.polytope(), doc.c_user())
    return QuadricsReport.from_system(doc.name, system)


def run_embed(
    doc: InputDocument, mode: str | None = None, character: str | None = None
) -> EmbeddingDescription:
    P = doc.polytope()
    cm = doc.char_matrix()
    lattice = enumerate_faces(P)
    chi = parse_character(character, doc, cm)
    spec = build_character_set(P, cm, chi, lattice, mode)
    return assemble_embedding(spec)


def run_toric(doc: InputDocument) -> ToricReport:
    P = doc.polytope()
    cm = doc.char_matrix()
    lattice = enumerate_faces(P)
    cert = check_toric(P, cm, lattice)
    report = ToricReport(
        passed=cert.passed,
        integral_b=cert.integral_b,
        B=None if cert.B is None else [[int(x) for x in r] for r in cert.B.tolist()],
        D=None if cert.D is None else list(cert.D),
        k_tilde=None if cert.k_tilde is None else list(cert.k_tilde.coords),
        k_embedding=(
            None if cert.k_embedding is None else list(cert.k_embedding.coords)
        ),
        reason=cert.reason,
    )
    if cert.passed:
        spec, _ = toric_embedding(P, cm, lattice)
        report.q = spec.q
        report.edge_lengths = [e.length for e in lattice_points_on_edges(P, lattice)]
    return report


def _emit(result: BaseModel, as_json: bool, text: Sequence[str]) -> None:
    if as_json:
        print(result.model_dump_json(indent=2))
    else:
        print("\n".join(text))


def _bundle_lines(bundle: ReportBundle) -> list[str]:
    lines = [f"{bundle.name}: {'PASS' if bundle.passed else 'FAIL'}"]
    for report in bundle.reports:
        status = "PASS" if report.passed else "FAIL"
        extra = f" ({report.inconclusive} inconclusive)" if report.inconclusive else ""
        lines.append(f"  {report.check}: {status}{extra}")
        for failure in report.failures:
            lines.append(f"    {failure.code}: {failure.message}")
    return lines


def cmd_validate(args: argparse.Namespace) -> int:
    bundle = run_validate(load_document(args.file))
    _emit(bundle, args.json, _bundle_lines(bundle))
    return EXIT_OK if bundle.passed else EXIT_FAILED


def cmd_faces(args: argparse.Namespace) -> int:
    faces = run_faces(load_document(args.file))
    lines = [
        f"{faces.name}: n={faces.n} m={faces.m} f0={faces.f0} f1={faces.f1}",
        "vertices:",
    ]
    lines += [f"  I={v.index_set} x=({', '.join(v.coords)})" for v in faces.vertices]
    lines.append("edges:")
    lines += [
        f"  J={e.index_set} {e.endpoints[0]} -- {e.endpoints[1]}" for e in faces.edges
    ]
    _emit(faces, args.json, lines)
    return EXIT_OK


def cmd_quadrics(args: argparse.Namespace) -> int:
    quadrics = run_quadrics(load_document(args.file))
    _emit(quadrics, args.json, quadrics.equations)
    return EXIT_OK


def cmd_embed(args: argparse.Namespace) -> int:
    description = run_embed(load_document(args.file), args.mode, args.character)
    lines = [
        f"mode: {description.mode}",
        f"target: {description.target}",
        f"q: {description.q}",
        f"c: {description.c_source}",
        f"character: {description.character}",
    ]
    if description.mode == "affine":
        lines.append(
            f"moment map: x in R^{description.n}, "
            f"followed by {description.q - 1} monomials"
        )
    for coords, text, sources in zip(
        description.coordinates, description.strings, description.provenance
    ):
        lines.append(f"{text}\t{coords}\t{'; '.join(sources)}")
    _emit(description, args.json, lines)
    return EXIT_OK


def cmd_toric(args: argparse.Namespace) -> int:
    report = run_toric(load_document(args.file))
    lines = [
        f"toric: {'PASS' if report.passed else 'FAIL'}",
        f"integral b: {report.integral_b}",
    ]
    if report.B is not None:
        lines += [f"B: {report.B}", f"D: {report.D}"]
    if report.k_tilde is not None:
        lines.append(f"k_P: {report.k_tilde}")
    if report.k_embedding is not None and report.k_embedding != report.k_tilde:
        lines.append(f"k used for the embedding (D b): {report.k_embedding}")
    if report.q is not None:
        lines.append(f"q: {report.q}")
    if report.reason:
        lines.append(f"reason: {report.reason}")
    _emit(report, args.json, lines)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_verify(args: argparse.Namespace) -> int:
    settings = get_settings()
    if settings.ci and args.seed is None:
        raise InputDocumentError("an explicit --seed is required in CI mode")
    try:
        config = VerifyConfig.from_settings(
            settings,
            samples=args.samples,
            seed=args.seed,
            tol_eq=args.tol,
            tol_sep=args.tol_sep,
        )
    except ValidationError as exc:
        raise InputDocumentError(str(exc)) from exc
    doc = load_document(args.file)
    P = doc.polytope()
    cm = doc.char_matrix()
    lattice = enumerate_faces(P)
    character = parse_character(args.character, doc, cm)
    spec = build_character_set(P, cm, character, lattice, args.mode)
    bundle = run_all(assemble_embedding(spec), P, cm, config, lattice)
    _emit(bundle, args.json, _bundle_lines(bundle))
    return EXIT_OK if bundle.passed else EXIT_FAILED


def cmd_cut(args: argparse.Namespace) -> int:
    doc = load_document(args.file)
    try:
        i, j = (int(x) - 1 for x in args.face.split(","))
        eps = Rational(args.eps)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputDocumentError(f"bad --face or --eps: {exc}") from exc
    if not isinstance(eps, Rational):
        raise InputDocumentError(f"--eps must be a rational number, got {args.eps!r}")
    P, lam = cut_codim2_face(doc.polytope(), doc.lam(), i, j, eps)
    lattice = enumerate_faces(P)
    result = InputDocument.from_data(P, lam)
    header = f"# f0={lattice.f0} f1={lattice.f1} m={lattice.m}"
    if args.output:
        Path(args.output).write_text(dump_document(result))
    _emit(result, args.json, [header, dump_document(result).rstrip("\n")])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine readable output")

    parser = argparse.ArgumentParser(
        prog="qtembed", description="Equivariant embeddings of quasitoric manifolds"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, handler, text in (
        ("validate", cmd_validate, "check the polytope and the characteristic matrix"),
        ("faces", cmd_faces, "list vertices and edges"),
        ("quadrics", cmd_quadrics, "equations of the moment-angle manifold"),
        ("toric", cmd_toric, "check the toric conditions"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("file")
        p.set_defaults(handler=handler)

    for name, handler, text in (
        ("embed", cmd_embed, "character set and embedding"),
        ("verify", cmd_verify, "numerical checks of the embedding"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("file")
        p.add_argument("--mode", choices=["affine", "projective"])
        p.add_argument("--character", help="'trivial' or comma separated integers")
        p.set_defaults(handler=handler)
        if name == "verify":
            p.add_argument("--samples", type=int)
            p.add_argument("--seed", type=int)
            p.add_argument("--tol", type=float, help="equality tolerance")
            p.add_argument("--tol-sep", type=float, help="separation threshold")

    p = sub.add_parser("cut", parents=[common], help="cut a codimension-2 face")
    p.add_argument("file")
    p.add_argument("--face", required=True, help="two facets, 1-based, e.g. 5,6")
    p.add_argument("--eps", required=True, help="cut depth, e.g. 1/2")
    p.add_argument("--output", help="also write the new document here")
    p.set_defaults(handler=cmd_cut)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    settings = get_settings()
    configure_logging(settings.log_level, settings.log_json)
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except InputDocumentError as exc:
        log.error("input_error", command=args.command, error=str(exc))
        return EXIT_INPUT
    except QtembedError as exc:
        log.error("command_failed", command=args.command, error=str(exc))
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
