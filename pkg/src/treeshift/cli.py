"""Command-line surface.

Exit codes: 0 = the queried property holds (or the artifact verified),
1 = it fails, 2 = input or usage error.  Input files are either vertex
shifts ("tsft n=<n> d=<d>" plus one 0-1 matrix per direction) or
forbidden-set shifts ("forbid: alphabet=<n> d=<d>" plus one block per
line), the latter converted to a vertex presentation on load.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from typing import Optional

from .blocks import (
    Block,
    ForbiddenTsft,
    parse_block,
    vertex_from_forbidden,
)
from .deciders import (
    CapExceededError,
    EmptyShiftError,
    brute_force_irreducible,
    decide_irreducible,
    decide_mixing,
)
from .dynamics import (
    NotIrreducibleError,
    build_periodic_tree,
    chaos_report,
    entropy_estimate,
    verify_periodic,
)
from .graphs import (
    TsftFormatError,
    VertexTsft,
    essentialize,
    format_tsft,
    parse_tsft,
    to_dot,
)
from .reports import (
    certificate_to_json,
    chaos_to_json,
    irreducibility_to_json,
    mixing_to_json,
    tsft_to_json,
    verify_report,
)


@dataclass
class LoadedShift:
    tsft: VertexTsft
    notes: list[str]


class InputError(ValueError):
    pass


def load_shift(path: str, arity: Optional[int] = None) -> LoadedShift:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    stripped = text.lstrip()
    notes: list[str] = []
    if stripped.startswith("forbid"):
        fshift = parse_forbidden(text, arity)
        pres = vertex_from_forbidden(fshift)
        notes.append(
            "converted forbidden-set input to a vertex presentation; "
            f"alphabet relabeling: "
            + ", ".join(f"{i}={b.to_text()}" for i, b in enumerate(pres.alphabet))
        )
        return LoadedShift(pres.tsft, notes)
    try:
        tsft = parse_tsft(text)
    except TsftFormatError as exc:
        raise InputError(str(exc)) from exc
    if arity is not None and arity != tsft.d:
        raise InputError(f"--arity {arity} conflicts with file arity {tsft.d}")
    return LoadedShift(tsft, notes)


def parse_forbidden(text: str, arity: Optional[int]) -> ForbiddenTsft:
    lines = text.splitlines()
    header_no = next(
        (no for no, ln in enumerate(lines, 1) if ln.strip()), None
    )
    if header_no is None:
        raise InputError("empty input")
    header = lines[header_no - 1].strip()
    if not header.startswith("forbid:"):
        raise InputError(f"line {header_no}: expected 'forbid:' header")
    fields = {}
    for tok in header[len("forbid:") :].split():
        key, _, val = tok.partition("=")
        if not val.isdigit():
            raise InputError(f"line {header_no}: bad header token {tok!r}")
        fields[key] = int(val)
    if "alphabet" not in fields:
        raise InputError(f"line {header_no}: header must give alphabet=<n>")
    d = fields.get("d", arity or 2)
    blocks = []
    for no in range(header_no + 1, len(lines) + 1):
        stripped = lines[no - 1].strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            blocks.append(parse_block(stripped, d))
        except ValueError as exc:
            raise InputError(f"line {no}: {exc}") from exc
    try:
        return ForbiddenTsft(
            alphabet_size=fields["alphabet"], d=d, forbidden=frozenset(blocks)
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def prepare(loaded: LoadedShift) -> LoadedShift:
    """Essentialize before deciding; size-mismatched input is left as is
    (the deciders short-circuit on it)."""
    tsft = loaded.tsft
    if tsft.size_mismatch:
        loaded.notes.append(
            "direction matrices have unequal sizes "
            f"{loaded.tsft.original_sizes}; smaller ones were zero-padded"
        )
        return loaded
    result = essentialize(tsft)
    if result.tsft is None:
        raise EmptyShiftError("every symbol is stranded: the shift is empty")
    if result.removed:
        loaded.notes.append(
            f"essentialization removed stranded symbols {list(result.removed)}; "
            f"surviving symbols renumbered from {list(result.kept)}"
        )
    return LoadedShift(result.tsft, loaded.notes)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _witness_lines(doc: dict) -> list[str]:
    lines = []
    for key, words in sorted(doc.get("witnesses", {}).items()):
        lines.append(f"  pair ({key}): P = {{{', '.join(words)}}}")
    return lines


def cmd_check(args) -> int:
    loaded = prepare(load_shift(args.input, args.arity))
    tsft = loaded.tsft
    mode = args.property
    if mode == "chaos":
        report = chaos_report(tsft, verify_depth=args.depth)
        doc = chaos_to_json(tsft, report, args.depth)
        holds = bool(report.chaotic)
        if args.format == "json":
            text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
        else:
            lines = [f"# {n}" for n in loaded.notes]
            if report.chaotic:
                lines.append(f"chaotic: yes (clause: {report.clause})")
            else:
                lines.append("chaotic: not established (sufficient conditions only)")
            lines.append(f"irreducible: {'yes' if report.irreducibility.verdict else 'no'}")
            lines.append(f"mixing: {'yes' if report.mixing.verdict else 'no'}")
            if report.periodic_certificate:
                cps = report.periodic_certificate.cps
                lines.append(f"periodic tree period: {{{', '.join(cps)}}}")
            if report.dense_prefix is not None:
                lines.append(
                    f"dense-orbit prefix of depth {report.dense_prefix.depth} "
                    f"covers all {len(report.dense_targets)} one-blocks"
                )
            text = "\n".join(lines) + "\n"
    elif mode == "mixing":
        report = decide_mixing(tsft)
        doc = mixing_to_json(tsft, report)
        holds = report.verdict
        if args.format == "json":
            text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
        else:
            lines = [f"# {n}" for n in loaded.notes]
            lines.append(f"mixing: {'yes' if report.verdict else 'no'}")
            if report.witness:
                lines.append(f"  witness P = {{{', '.join(report.witness)}}}")
                lines.append(f"  refines to uniform depth {report.k_found}")
            lines.append(f"  ({report.justification})")
            text = "\n".join(lines) + "\n"
    else:
        report = decide_irreducible(tsft)
        doc = irreducibility_to_json(tsft, report)
        holds = report.verdict
        if args.format == "json":
            text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
        else:
            lines = [f"# {n}" for n in loaded.notes]
            lines.append(f"irreducible: {'yes' if report.verdict else 'no'}")
            lines.extend(_witness_lines(doc))
            if report.counterexample:
                zc = report.counterexample
                lines.append(
                    f"  zero cycle for pair {zc.pair}: word {zc.word!r}, "
                    f"terminal-state trace {list(zc.trace)}"
                )
            lines.append(f"  ({report.justification})")
            text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    if args.figure:
        from .plots import render_graph_figure

        render_graph_figure(tsft, args.figure)
    return 0 if holds else 1


def cmd_entropy(args) -> int:
    loaded = prepare(load_shift(args.input, args.arity))
    tsft = loaded.tsft
    est = entropy_estimate(tsft, args.m)
    if args.format == "json":
        doc = {
            "kind": "entropy",
            "tsft": tsft_to_json(tsft),
            "m": list(est.ms),
            "log_count": list(est.log_counts),
            "h": list(est.h_values),
            "limit": est.limit,
            "degenerate": est.degenerate,
            "exact_through": est.exact_through,
        }
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        from .blocks import enumerate_blocks

        rows = ["m\tblocks\th"]
        for m, logc, h in zip(est.ms, est.log_counts, est.h_values):
            if m <= est.exact_through and logc < 140:
                count = str(enumerate_blocks(tsft, m, list_cap=0).total)
            else:
                count = f"ln={logc:.6g}"
            rows.append(f"{m}\t{count}\t{h:.10f}")
        if est.degenerate:
            rows.append("# single-tree shift: entropy defined as 0")
        elif est.limit is not None:
            rows.append(f"# extrapolated limit\t{est.limit:.10f}")
        text = "\n".join(rows) + "\n"
    _emit(text, args.out)
    if args.figure:
        from .plots import render_entropy_figure

        render_entropy_figure(est, args.figure)
    return 0


def cmd_periodic(args) -> int:
    loaded = prepare(load_shift(args.input, args.arity))
    tsft = loaded.tsft
    if args.block:
        block = parse_block(args.block, tsft.d)
    else:
        block = Block(tsft.d, 1, (0,))
    cert = build_periodic_tree(tsft, block)
    depth = args.depth or 2 * (cert.cps.depth + block.height)
    ok, why = verify_periodic(cert, tsft, depth)
    doc = {
        "kind": "periodic-certificate",
        "tsft": tsft_to_json(tsft),
        "block": block.to_text(),
        "certificate": certificate_to_json(cert),
        "verified_depth": depth,
        "verified": ok,
    }
    if args.format == "json":
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        lines = [f"# {n}" for n in loaded.notes]
        lines.append(f"period P = {{{', '.join(cert.cps)}}}")
        lines.append(
            "seed: "
            + ", ".join(f"{w or 'e'}={v}" for w, v in cert.seed.labels)
        )
        lines.append(f"verified to depth {depth}: {'ok' if ok else why}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0 if ok else 1


def cmd_export_dot(args) -> int:
    loaded = load_shift(args.input, args.arity)
    _emit(to_dot(loaded.tsft), args.out)
    if args.figure:
        from .plots import render_graph_figure

        render_graph_figure(loaded.tsft, args.figure)
    return 0


def cmd_verify_report(args) -> int:
    try:
        with open(args.report, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot load report: {exc}", file=sys.stderr)
        return 2
    checks = verify_report(doc)
    failed = [c for c in checks if not c[1]]
    for name, ok, detail in checks:
        print(f"{'ok  ' if ok else 'FAIL'} {name}: {detail}")
    if failed:
        print(f"first failing check: {failed[0][0]} ({failed[0][2]})")
        return 1
    return 0


def cmd_oracle(args) -> int:
    rng = random.Random(args.seed)
    cases: list[tuple[str, VertexTsft]] = []
    if args.input:
        cases.append((args.input, prepare(load_shift(args.input, args.arity)).tsft))
    else:
        d = args.arity or 2
        n = args.n
        made = 0
        while made < args.batch:
            mats = [
                [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
                for _ in range(d)
            ]
            candidate = VertexTsft.from_matrices(mats, d=d)
            reduced = essentialize(candidate).tsft
            if reduced is None:
                continue
            cases.append((f"random[{made}]", reduced))
            made += 1
    disagreements = 0
    for name, tsft in cases:
        report = decide_irreducible(tsft)
        oracle = brute_force_irreducible(tsft, height=1, depth_cap=args.depth)
        agree = (report.verdict and oracle) or (not report.verdict and not oracle)
        status = "agree" if agree else "DISAGREE"
        if not agree:
            disagreements += 1
        print(
            f"{name}: decider={'yes' if report.verdict else 'no'} "
            f"oracle(depth={args.depth})={'yes' if oracle else 'no'} [{status}]"
        )
    print(f"{len(cases)} case(s), {disagreements} disagreement(s)")
    return 0 if disagreements == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treeshift",
        description="Decide irreducibility/mixing of tree-shifts of finite "
        "type, emit certificates, and estimate topological entropy.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, figure=False):
        p.add_argument("input", help="tsft or forbidden-set file")
        p.add_argument("--arity", type=int, default=None, help="tree arity d")
        p.add_argument("--out", default=None, help="write output to a file")
        p.add_argument(
            "--format", choices=("text", "json"), default="text"
        )
        if figure:
            p.add_argument(
                "--figure", default=None, help="also render a figure (PNG/PDF)"
            )

    p = sub.add_parser("check", help="decide a property and report evidence")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--irreducible", dest="property", action="store_const", const="irreducible"
    )
    group.add_argument(
        "--mixing", dest="property", action="store_const", const="mixing"
    )
    group.add_argument(
        "--chaos", dest="property", action="store_const", const="chaos"
    )
    add_common(p, figure=True)
    p.add_argument(
        "--depth", type=int, default=6, help="certificate verification depth"
    )
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("entropy", help="block counts and entropy estimates")
    add_common(p, figure=True)
    p.add_argument("--m", type=int, default=8, help="largest block height")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("periodic", help="build and verify a periodic tree")
    add_common(p)
    p.add_argument("--block", default=None, help="seed block text")
    p.add_argument("--depth", type=int, default=None, help="verification depth")
    p.set_defaults(func=cmd_periodic)

    p = sub.add_parser("export-dot", help="export the labeled graph as DOT")
    add_common(p, figure=True)
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("verify-report", help="re-check a report document")
    p.add_argument("report", help="JSON report file")
    p.set_defaults(func=cmd_verify_report)

    p = sub.add_parser(
        "oracle", help="cross-check the decider against the brute-force search"
    )
    p.add_argument("input", nargs="?", default=None)
    p.add_argument("--arity", type=int, default=None)
    p.add_argument("--n", type=int, default=2, help="alphabet size for random batch")
    p.add_argument("--batch", type=int, default=20, help="random instance count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=8, help="oracle search depth")
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, EmptyShiftError, CapExceededError, NotIrreducibleError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
