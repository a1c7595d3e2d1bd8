"""Command-line interface.

Exit codes: 0 success / stably diffeomorphic, 1 distinct invariant or a
failed check, 2 not determined, 64 usage error, 65 malformed input,
66 unreadable file.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .algebra import format_h1, h1_invariants, h2_f2_dimension
from .classify import (
    DistinctInvariant,
    NotDetermined,
    StablyDiffeomorphic,
    format_path,
    parse_path,
    stable_diffeo_decide,
)
from .diagram import (
    NormalFormDiagram,
    euler_characteristic,
    from_presentation,
    normal_one_type,
    parse_diagram,
    serialize_diagram,
    signature,
    validate,
)
from .errors import (
    KirbyTietzeError,
    MalformedInputError,
    ParseError,
    PreconditionError,
    RejectedMoveError,
)
from .groups import DEFAULT_FINGERPRINT, fingerprint, group_by_name
from .moves import Stabilize, apply_moves, parse_certificate, replay, serialize_certificate
from .presentation import Word, format_letters, parse_letters, tietze_S1, tietze_S2, tietze_T1, tietze_T1_inverse
from .surgery import surgery_on_loop
from .textio import parse_presentation_file, render_diagram_text, serialize_presentation

EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_NOINPUT = 66

log = logging.getLogger("kirbytietze")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


class _FileError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _FileError(f"cannot read {path}: {exc.strerror or exc}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _FileError(f"cannot write {path}: {exc.strerror or exc}") from None


def _load_diagram(path: str) -> NormalFormDiagram:
    """Read a diagram file, or a presentation file (missing framings default to 0)."""
    text = _read(path)
    if any(line.strip().startswith("one_handles") for line in text.splitlines()):
        return parse_diagram(text)
    P, framings = parse_presentation_file(text)
    return from_presentation(P, framings)


def _groups(text: str | None):
    names = text.split(",") if text else list(DEFAULT_FINGERPRINT)
    return [group_by_name(n.strip()) for n in names if n.strip()]


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _diagram_payload(D: NormalFormDiagram) -> dict:
    return {
        "num_one_handles": D.num_one_handles,
        "handles": [{"word": format_letters(w), "framing": f} for w, f in D.handles],
    }


# --- subcommands ----------------------------------------------------------------

def cmd_pres_check(args) -> int:
    P, framings = parse_presentation_file(_read(args.file))
    h1 = h1_invariants(P)
    prints = fingerprint(P, _groups(args.groups))
    payload = {
        "num_generators": P.num_generators,
        "relators": [r.text() for r in P.relators],
        "framings": list(framings) if framings is not None else None,
        "H1": format_h1(h1),
        "h2_f2_dimension": h2_f2_dimension(P),
        "hom_counts": dict(prints),
    }
    text = "\n".join(
        [
            f"generators={P.num_generators} relators={P.num_relators}",
            f"H1={format_h1(h1)} dim_H2(F2)={h2_f2_dimension(P)}",
            "hom: " + " ".join(f"{name}={c}" for name, c in prints),
        ]
    )
    _emit(args, payload, text)
    return 0


def cmd_pres_tietze(args) -> int:
    P, _ = parse_presentation_file(_read(args.file))

    def need(name):
        value = getattr(args, name)
        if value is None:
            raise _UsageError(f"--op {args.op} needs --{name.replace('_', '-')}")
        return value

    if args.op == "T1":
        Q = tietze_T1(P, Word(parse_letters(args.word or "-")))
    elif args.op == "T1inv":
        (gen,) = parse_letters(need("gen"))
        Q = tietze_T1_inverse(P, abs(gen), need("rel"))
    elif args.op == "S1":
        sign = {"+": 1, "-": -1}[need("sign")]
        Q = tietze_S1(P, need("i"), need("j"), sign, Word(parse_letters(args.word or "-")))
    else:
        Q = tietze_S2(P, add=not args.delete, rel=args.rel)
    _write(args.output, serialize_presentation(Q))
    return 0


def cmd_diag_build(args) -> int:
    D = _load_diagram(args.file)
    _write(args.output, serialize_diagram(D))
    return 0


def cmd_diag_show(args) -> int:
    D = _load_diagram(args.file)
    _emit(args, _diagram_payload(D), render_diagram_text(D))
    return 0


def cmd_diag_invariants(args) -> int:
    D = _load_diagram(args.file)
    problems = validate(D)
    if problems:
        raise PreconditionError("diagram is not in normal form: " + "; ".join(problems))
    P = D.presentation()
    nt = normal_one_type(D)
    h1 = format_h1(h1_invariants(P))
    prints = fingerprint(P, _groups(args.groups))
    chi, sigma = euler_characteristic(D), signature(D)
    w = "".join(map(str, nt.w_class)) or "-"
    payload = {
        "chi": chi,
        "sigma": sigma,
        "H1": h1,
        "spin": nt.spin,
        "w_class": list(nt.w_class),
        "hom_counts": dict(prints),
    }
    text = "\n".join(
        [
            f"chi={chi} sigma={sigma} H1={h1} spin={'yes' if nt.spin else 'no'}",
            f"w_class={w}",
            "hom: " + " ".join(f"{name}={c}" for name, c in prints),
        ]
    )
    _emit(args, payload, text)
    return 0


def cmd_moves_apply(args) -> int:
    D = _load_diagram(args.diagram)
    cert = parse_certificate(_read(args.cert))
    try:
        out = apply_moves(D, [Stabilize()] * cert.k + list(cert.moves))
    except RejectedMoveError as exc:
        index = exc.index - cert.k if exc.index is not None else None
        sys.stderr.write(f"move {index} rejected: {exc.clause}\n")
        return 1
    _write(args.output, serialize_diagram(out))
    return 0


def cmd_surgery_run(args) -> int:
    loops = args.loop or []
    parities = args.parity or []
    if len(loops) != len(parities):
        raise _UsageError("each --loop needs a matching --parity")
    D = NormalFormDiagram(args.handles)
    for word, parity in zip(loops, parities):
        D = surgery_on_loop(D, Word(parse_letters(word)), parity)
    if args.json:
        _emit(args, _diagram_payload(D), "")
    else:
        _write(args.output, serialize_diagram(D))
    return 0


def cmd_classify_decide(args) -> int:
    D1, D2 = _load_diagram(args.d1), _load_diagram(args.d2)
    path = parse_path(_read(args.path)) if args.path else None
    verdict = stable_diffeo_decide(
        D1,
        D2,
        path=path,
        search_depth=args.search_depth,
        word_bound=args.word_bound,
        budget=args.budget,
        groups=_groups(args.groups),
    )
    if isinstance(verdict, StablyDiffeomorphic):
        if args.cert_out:
            _write(args.cert_out, serialize_certificate(verdict.cert))
        payload = {
            "verdict": "stably_diffeomorphic",
            "path": format_path(verdict.path).splitlines(),
            "certificate": serialize_certificate(verdict.cert).splitlines(),
            "k": verdict.cert.k,
            "l": verdict.cert.l,
        }
        text = "stably diffeomorphic\n# Tietze path\n" + format_path(verdict.path)
        text += "# certificate\n" + serialize_certificate(verdict.cert)
    elif isinstance(verdict, DistinctInvariant):
        payload = {
            "verdict": "distinct_invariant",
            "name": verdict.name,
            "value1": verdict.value1,
            "value2": verdict.value2,
            "witnesses": [list(w) for w in verdict.witnesses],
        }
        text = f"distinct: {verdict.name} {verdict.value1} vs {verdict.value2}\n"
        text += "".join(f"  {n}: {a} vs {b}\n" for n, a, b in verdict.witnesses)
    else:
        assert isinstance(verdict, NotDetermined)
        payload = {"verdict": "not_determined", "reason": verdict.reason}
        text = f"not determined: {verdict.reason}"
    _emit(args, payload, text)
    return verdict.exit_code


def cmd_cert_verify(args) -> int:
    D1, D2 = _load_diagram(args.d1), _load_diagram(args.d2)
    cert = parse_certificate(_read(args.cert))
    result = replay(D1, cert, D2)
    payload = {"ok": result.ok, "failed_index": result.failed_index, "reason": result.reason}
    if result.ok:
        text = f"ok: certificate verified (k={cert.k} l={cert.l}, {len(cert.moves)} moves)"
    elif result.failed_index is not None:
        text = f"failed at move {result.failed_index}: {result.reason}"
    else:
        text = f"failed: {result.reason}"
    _emit(args, payload, text)
    return 0 if result.ok else 1


# --- argument parsing -------------------------------------------------------------

def _parity(text: str) -> int:
    if text not in ("0", "1"):
        raise argparse.ArgumentTypeError("parity must be 0 or 1")
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--groups", help="comma-separated fingerprint groups, e.g. Z2,Z3,S3")

    parser = _Parser(prog="kirbytietze", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    top = parser.add_subparsers(dest="area", required=True, parser_class=_Parser)

    pres = top.add_parser("pres", help="presentations").add_subparsers(dest="cmd", required=True)
    p = pres.add_parser("check", parents=[common], help="parse and summarize a presentation")
    p.add_argument("file")
    p.set_defaults(func=cmd_pres_check)
    p = pres.add_parser("tietze", parents=[common], help="apply one Tietze transformation")
    p.add_argument("file")
    p.add_argument("--op", required=True, choices=["T1", "T1inv", "S1", "S2"])
    p.add_argument("--word", help="x for T1, w for S1")
    p.add_argument("--gen", help="generator letter for T1inv")
    p.add_argument("--rel", type=int, help="relator index (T1inv, S2 --delete)")
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--sign", choices=["+", "-"])
    p.add_argument("--delete", action="store_true", help="S2: delete the empty relator --rel")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_pres_tietze)

    diag = top.add_parser("diag", help="normal-form diagrams").add_subparsers(dest="cmd", required=True)
    p = diag.add_parser("build", parents=[common], help="diagram file from a presentation file")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_diag_build)
    p = diag.add_parser("show", parents=[common], help="render a diagram as text")
    p.add_argument("file")
    p.set_defaults(func=cmd_diag_show)
    p = diag.add_parser("invariants", parents=[common], help="chi, signature, H1, spin, w-class, hom counts")
    p.add_argument("file")
    p.set_defaults(func=cmd_diag_invariants)

    moves = top.add_parser("moves", help="diagram moves").add_subparsers(dest="cmd", required=True)
    p = moves.add_parser("apply", parents=[common], help="apply a certificate's moves to a diagram")
    p.add_argument("diagram")
    p.add_argument("cert")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_moves_apply)

    surgery = top.add_parser("surgery", help="surgery on loops").add_subparsers(dest="cmd", required=True)
    p = surgery.add_parser("run", parents=[common], help="surgery on loops in #_N S^1xS^3")
    p.add_argument("--handles", type=int, required=True)
    p.add_argument("--loop", action="append")
    p.add_argument("--parity", action="append", type=_parity)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_surgery_run)

    classify = top.add_parser("classify", help="stable classification").add_subparsers(dest="cmd", required=True)
    p = classify.add_parser("decide", parents=[common], help="decide stable diffeomorphism")
    p.add_argument("d1")
    p.add_argument("d2")
    p.add_argument("--path", help="Tietze path file; skips the search")
    p.add_argument("--search-depth", type=int, default=4)
    p.add_argument("--word-bound", type=int, default=4)
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--cert-out", help="write the certificate here")
    p.set_defaults(func=cmd_classify_decide)

    cert = top.add_parser("cert", help="certificates").add_subparsers(dest="cmd", required=True)
    p = cert.add_parser("verify", parents=[common], help="replay a certificate from D1 to D2")
    p.add_argument("d1")
    p.add_argument("d2")
    p.add_argument("cert")
    p.set_defaults(func=cmd_cert_verify)
    return parser


def dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except _FileError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_NOINPUT
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_DATA
    except (MalformedInputError, PreconditionError, KirbyTietzeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
