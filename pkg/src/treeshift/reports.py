"""JSON report documents and their offline re-verification.

Every decision document embeds the shift it talks about, so a third party
can re-check the attached evidence (prefix-set witnesses, zero cycles,
periodic-tree certificates, dense-orbit prefixes) without re-running the
deciders.
"""

from __future__ import annotations

from typing import Any, Optional

from .blocks import Block, parse_block, vertex_allows_block
from .deciders import (
    IrreducibilityReport,
    MixingReport,
    ZeroCycleWitness,
    validate_mixing_witness,
    validate_pair_witness,
    validate_zero_cycle,
)
from .dynamics import (
    ChaosReport,
    PeriodicTreeCertificate,
    TreePattern,
    verify_periodic,
)
from .graphs import VertexTsft
from .words import CompletePrefixSet

Check = tuple[str, bool, str]


def tsft_to_json(tsft: VertexTsft) -> dict[str, Any]:
    return {
        "n": tsft.n,
        "d": tsft.d,
        "matrices": [[list(row) for row in a] for a in tsft.matrices],
        "original_sizes": list(tsft.original_sizes),
    }


def tsft_from_json(doc: dict[str, Any]) -> VertexTsft:
    return VertexTsft(
        n=doc["n"],
        d=doc["d"],
        matrices=tuple(tuple(tuple(r) for r in a) for a in doc["matrices"]),
        original_sizes=tuple(doc.get("original_sizes", ())),
    )


def irreducibility_to_json(
    tsft: VertexTsft, report: IrreducibilityReport
) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "kind": "irreducibility",
        "tsft": tsft_to_json(tsft),
        "verdict": report.verdict,
        "bound_used": report.bound_used,
        "justification": report.justification,
        "witnesses": {
            f"{i},{j}": list(cps) for (i, j), cps in sorted(report.witnesses.items())
        },
    }
    if report.counterexample is not None:
        doc["zero_cycle"] = zero_cycle_to_json(report.counterexample)
    if report.failing_pairs:
        doc["failing_pairs"] = [list(p) for p in report.failing_pairs]
    return doc


def zero_cycle_to_json(w: ZeroCycleWitness) -> dict[str, Any]:
    return {
        "pair": list(w.pair),
        "word": w.word,
        "trace": [list(v) for v in w.trace],
    }


def zero_cycle_from_json(doc: dict[str, Any]) -> ZeroCycleWitness:
    return ZeroCycleWitness(
        pair=tuple(doc["pair"]),
        word=doc["word"],
        trace=tuple(tuple(v) for v in doc["trace"]),
    )


def mixing_to_json(tsft: VertexTsft, report: MixingReport) -> dict[str, Any]:
    return {
        "kind": "mixing",
        "tsft": tsft_to_json(tsft),
        "verdict": report.verdict,
        "witness": list(report.witness) if report.witness else None,
        "k_found": report.k_found,
        "justification": report.justification,
    }


def certificate_to_json(cert: PeriodicTreeCertificate) -> dict[str, Any]:
    return {
        "cps": list(cert.cps),
        "seed": {w: v for w, v in cert.seed.labels},
    }


def certificate_from_json(d: int, doc: dict[str, Any]) -> PeriodicTreeCertificate:
    return PeriodicTreeCertificate(
        cps=CompletePrefixSet(tuple(doc["cps"]), d),
        seed=TreePattern.from_map(d, {w: int(v) for w, v in doc["seed"].items()}),
    )


def chaos_to_json(
    tsft: VertexTsft, report: ChaosReport, verify_depth: int
) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "kind": "chaos",
        "tsft": tsft_to_json(tsft),
        "chaotic": report.chaotic,
        "clause": report.clause,
        "sensitive": report.sensitive,
        "sensitivity_delta": report.sensitivity_delta,
        "verify_depth": verify_depth,
        "irreducibility": irreducibility_to_json(tsft, report.irreducibility),
        "mixing": mixing_to_json(tsft, report.mixing),
    }
    if report.periodic_certificate is not None:
        doc["periodic_certificate"] = certificate_to_json(
            report.periodic_certificate
        )
    if report.dense_prefix is not None:
        doc["dense_prefix"] = {w: v for w, v in report.dense_prefix.labels}
        doc["dense_targets"] = [b.to_text() for b in report.dense_targets]
    return doc


# ---------------------------------------------------------------------------
# Verification


def _check_cps(words: list[str], d: int) -> bool:
    try:
        CompletePrefixSet(tuple(words), d)
    except ValueError:
        return False
    return True


def _verify_irreducibility(doc: dict[str, Any], tsft: VertexTsft) -> list[Check]:
    checks: list[Check] = []
    if doc["verdict"]:
        pairs = {(i, j) for i in range(tsft.n) for j in range(tsft.n)}
        seen = set()
        for key, words in doc.get("witnesses", {}).items():
            i, j = (int(t) for t in key.split(","))
            seen.add((i, j))
            ok = validate_pair_witness(tsft, i, j, words)
            checks.append(
                (
                    f"witness {i},{j}",
                    ok,
                    "CPS of positive connecting words" if ok else "invalid witness",
                )
            )
        missing = pairs - seen
        checks.append(
            (
                "witness coverage",
                not missing,
                "all pairs witnessed" if not missing else f"missing {sorted(missing)}",
            )
        )
    else:
        zc = doc.get("zero_cycle")
        if zc is None:
            checks.append(
                (
                    "zero cycle",
                    "witness unavailable" in doc.get("justification", ""),
                    "negative verdict carries no cycle witness",
                )
            )
        else:
            ok = validate_zero_cycle(tsft, zero_cycle_from_json(zc))
            checks.append(
                ("zero cycle", ok, "cycle re-verified" if ok else "cycle invalid")
            )
    return checks


def _verify_mixing(doc: dict[str, Any], tsft: VertexTsft) -> list[Check]:
    checks: list[Check] = []
    if doc["verdict"]:
        words = doc.get("witness") or []
        ok = validate_mixing_witness(tsft, words)
        checks.append(
            (
                "mixing witness",
                ok,
                "uniform CPS of all-positive words" if ok else "invalid witness",
            )
        )
        k = doc.get("k_found")
        depth_ok = k is not None and all(len(w) <= k for w in words)
        checks.append(
            ("witness depth", depth_ok, f"refines to uniform depth {k}")
        )
    else:
        checks.append(("mixing verdict", True, "negative verdict, no witness due"))
    return checks


def _verify_chaos(doc: dict[str, Any], tsft: VertexTsft) -> list[Check]:
    checks: list[Check] = []
    checks.extend(_verify_irreducibility(doc["irreducibility"], tsft))
    checks.extend(_verify_mixing(doc["mixing"], tsft))
    clause = doc.get("clause")
    if clause == "mixing":
        checks.append(
            (
                "clause",
                bool(doc["mixing"]["verdict"]),
                "mixing verdict backs the clause",
            )
        )
    elif clause == "irreducible-finite-type":
        checks.append(
            (
                "clause",
                bool(doc["irreducibility"]["verdict"]),
                "irreducibility verdict backs the clause",
            )
        )
    if doc.get("chaotic"):
        cert_doc = doc.get("periodic_certificate")
        if cert_doc is None:
            checks.append(("periodic certificate", False, "missing"))
        else:
            cert = certificate_from_json(tsft.d, cert_doc)
            ok, why = verify_periodic(cert, tsft, int(doc.get("verify_depth", 6)))
            checks.append(
                ("periodic certificate", ok, "verified" if ok else str(why))
            )
        prefix_doc = doc.get("dense_prefix")
        if prefix_doc is None:
            checks.append(("dense prefix", False, "missing"))
        else:
            pattern = TreePattern.from_map(
                tsft.d, {w: int(v) for w, v in prefix_doc.items()}
            )
            for text in doc.get("dense_targets", []):
                block = parse_block(text, tsft.d)
                hit = bool(pattern.contains_block(block))
                checks.append(
                    (
                        f"dense prefix contains {text}",
                        hit,
                        "found" if hit else "target block missing",
                    )
                )
            edge_ok = _pattern_edges_ok(pattern, tsft)
            checks.append(
                (
                    "dense prefix admissible",
                    edge_ok,
                    "every edge allowed" if edge_ok else "forbidden edge",
                )
            )
    return checks


def _pattern_edges_ok(pattern: TreePattern, tsft: VertexTsft) -> bool:
    labels = pattern.as_map()
    for w, v in labels.items():
        for k in range(tsft.d):
            child = w + str(k)
            if child in labels and not tsft.allows_edge(k, v, labels[child]):
                return False
    return True


def verify_report(doc: dict[str, Any]) -> list[Check]:
    """Re-check every piece of evidence in a report document."""
    kind = doc.get("kind")
    if "tsft" not in doc:
        return [("document", False, "no embedded shift")]
    tsft = tsft_from_json(doc["tsft"])
    if kind == "irreducibility":
        return _verify_irreducibility(doc, tsft)
    if kind == "mixing":
        return _verify_mixing(doc, tsft)
    if kind == "chaos":
        return _verify_chaos(doc, tsft)
    return [("document", False, f"unknown report kind {kind!r}")]
