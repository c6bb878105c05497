"""Command-line front end: ``pbranch witt|hall|homology|verify``.

Every command prints one record ``{command, parameters, caps, evidence,
result}`` as sorted JSON (or CSV rows with ``--csv``).  Wall time is kept in
the cached record only, so repeated runs print identical bytes.  Setting
``PBRANCH_CACHE`` to a directory enables a results cache keyed by the digest
of the canonical parameters.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Sequence

from . import homology as _homology
from . import permgroups as _permgroups
from . import quotients as _quotients
from .errors import ResourceError, UsageError

SCHEMA_VERSION = 1


@dataclass
class RunRecord:
    command: str
    parameters: dict
    caps: dict
    evidence: str
    result: dict
    wall_time: float = 0.0

    def payload(self) -> dict:
        """Everything except the wall time."""
        out = asdict(self)
        del out["wall_time"]
        return out

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls(**json.loads(text))


def canonical_key(command: str, parameters: dict, caps: dict, evidence: str) -> str:
    blob = json.dumps({"v": SCHEMA_VERSION, "command": command, "parameters": parameters, "caps": caps, "evidence": evidence}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _cache_dir() -> Path | None:
    d = os.environ.get("PBRANCH_CACHE")
    return Path(d) if d else None


def run_cached(command: str, parameters: dict, caps: dict, requested: str, compute: Callable[[], tuple[dict, str]], use_cache: bool = True) -> RunRecord:
    """Run ``compute`` (returning result and achieved evidence level) or load it from the cache."""
    cache = _cache_dir() if use_cache else None
    path = cache / f"{canonical_key(command, parameters, caps, requested)}.json" if cache else None
    if path is not None and path.exists():
        return RunRecord.from_json(path.read_text())
    t0 = time.perf_counter()
    result, evidence = compute()
    rec = RunRecord(command, parameters, caps, evidence, result, round(time.perf_counter() - t0, 6))
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(rec.to_json())
        tmp.replace(path)
    return rec


# argument helpers -------------------------------------------------------------------


def parse_composition(text: str) -> tuple[int, ...]:
    try:
        ns = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"cannot parse composition {text!r}; expected e.g. 2,2") from None
    if not ns or any(x < 0 for x in ns):
        raise UsageError(f"composition {text!r} needs nonnegative entries")
    return ns


def _parse_group(spec: str, max_order: int):
    G = _permgroups.parse_group(spec)
    if G.order > max_order:
        raise ResourceError(f"group {spec} has order {G.order} > {max_order}", cap="max_group_order", estimate=G.order)
    return G


def _pi_n(tokens: Sequence[str]) -> int:
    if len(tokens) != 2 or tokens[0] != "pi":
        raise UsageError("expected 'pi <n>'")
    try:
        return int(tokens[1])
    except ValueError:
        raise UsageError(f"cannot parse n from {tokens[1]!r}") from None


def _summary(X, evidence: str):
    """Integral homology, or modular and rational ranks under ``--evidence modular``."""
    if evidence == "integral":
        return _homology.reduced_homology(X, "Z")
    return _homology.homology_auto(X) if X.n_faces() <= _homology.MAX_FACES_Z else _modular_summary(X)


def _modular_summary(X):
    q = _homology.reduced_homology(X, "Q")
    for p in (2, 3, 5, 7):
        if _homology.reduced_homology(X, p).betti != q.betti:
            raise ResourceError(f"torsion at {p} present but integral computation exceeds caps", cap="max_faces")
    return _homology.HomologySummary(q.betti, {}, "Z", "modular+rational")


# commands -----------------------------------------------------------------------------


def cmd_witt(args) -> tuple[dict, dict, str]:
    from .freelie import witt

    rows = [{"ns": list(ns), "witt": witt(ns)} for ns in map(parse_composition, args.ns)]
    return {"ns": args.ns}, {"rows": rows}, "exact"


def cmd_hall(args) -> tuple[dict, dict, str]:
    from .freelie import HallBasis, to_string

    rows = []
    for ns in map(parse_composition, args.ns):
        B = HallBasis(len(ns), bound=list(ns))
        rows.append({"ns": list(ns), "monomials": [to_string(t) for t in B.filter(list(ns))]})
    return {"ns": args.ns}, {"rows": rows}, "exact"


def cmd_homology(args) -> tuple[dict, dict, str]:
    from .equivariant import poset_quotient_homology
    from .fixedpoints import fixed_homology
    from .partitions import enumerate_partitions
    from .simplicial import SimplicialComplex, partition_complex

    target = list(args.target)
    if target and target[0] in ("quotient", "fixed"):
        kind = target.pop(0)
        if not args.group:
            raise UsageError(f"'homology {kind}' needs --group")
        n = _pi_n(target)
        G = _parse_group(args.group, args.max_group_order)
        if G.n != n:
            raise UsageError(f"group acts on {G.n} points, not {n}")
        params = {"space": kind, "group": args.group, "n": n}
        if kind == "quotient":
            if n < 3:
                raise UsageError("quotients need n >= 3")
            H = poset_quotient_homology(enumerate_partitions(n), G)
        else:
            H = fixed_homology(G)
    elif target and target[0] == "pi":
        n = _pi_n(target)
        params = {"space": "pi", "n": n}
        H = _summary(partition_complex(n), args.evidence)
    elif len(target) == 1:
        text = Path(target[0]).read_text()
        params = {"space": "file", "sha256": hashlib.sha256(text.encode()).hexdigest()}
        H = _summary(SimplicialComplex.deserialize(text), args.evidence)
    else:
        raise UsageError("expected 'pi <n>', a complex file, or 'quotient|fixed --group <spec> pi <n>'")
    return params, {"homology": H.to_json(), "summary": str(H)}, H.evidence


def cmd_verify(args) -> tuple[dict, dict, str]:
    kind, arg = args.kind, args.arg
    if kind == "branching":
        from .freelie import verify_branching

        rep = verify_branching(parse_composition(_need(arg, kind)), args.evidence)
        return {"kind": kind, "ns": arg}, {**rep.to_json(), "passed": rep.unimodular}, rep.evidence
    if kind == "barcelo":
        from .barcelo import barcelo_rank_check

        rep = barcelo_rank_check(int(_need(arg, kind)))
        res = {"n": rep.n, "rank": rep.rank, "expected": rep.expected, "unimodular": rep.unimodular, "passed": rep.unimodular}
        return {"kind": kind, "n": arg}, res, "integral"
    if kind == "collapse":
        from .collapse import verify_collapse_iso

        rep = verify_collapse_iso(parse_composition(_need(arg, kind)), integral=args.evidence == "integral")
        return {"kind": kind, "ns": arg}, {**rep.to_json(), "passed": rep.isomorphism}, rep.evidence
    if kind == "main":
        from .collapse import verify_main_theorem

        rep = verify_main_theorem(parse_composition(_need(arg, kind)))
        return {"kind": kind, "ns": arg}, rep.to_json(), rep.collapse.evidence
    if kind == "fixedpoints":
        from .fixedpoints import DEFAULT_CORPUS, verify_fixed_predictions

        corpus = DEFAULT_CORPUS if args.corpus == "default" else tuple(s for s in args.corpus.split(";;") if s.strip())
        reps = verify_fixed_predictions(corpus)
        res = {"reports": [r.to_json() for r in reps], "passed": all(r.match for r in reps)}
        return {"kind": kind, "corpus": list(corpus)}, res, "integral"
    if kind == "quotients":
        from .quotients import young_quotient_homology

        rep = young_quotient_homology(parse_composition(_need(arg, kind)))
        return {"kind": kind, "ns": arg}, {**rep.to_json(), "passed": rep.match}, rep.direct.evidence
    raise UsageError(f"unknown verification {kind!r}")


def _need(arg: str | None, kind: str) -> str:
    if arg is None:
        raise UsageError(f"'verify {kind}' needs an argument")
    return arg


# output -------------------------------------------------------------------------------


def _flatten(prefix: str, obj, out: list[tuple[str, str]]) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, list) and obj and all(isinstance(x, dict) for x in obj):
        for i, x in enumerate(obj):
            _flatten(f"{prefix}[{i}]", x, out)
    else:
        out.append((prefix, obj if isinstance(obj, str) else json.dumps(obj, sort_keys=True)))


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    rows: list[tuple[str, str]] = []
    _flatten("", payload, rows)
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", help="JSON output (default)")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv", help="key,value CSV output")
    common.add_argument("--max-faces", type=int, default=None, help="face cap for integral homology")
    common.add_argument("--max-group-order", type=int, default=_permgroups.MAX_GROUP_ORDER)
    common.add_argument("--evidence", choices=("integral", "modular"), default="integral")
    common.add_argument("--no-cache", action="store_true", help="ignore PBRANCH_CACHE")
    common.set_defaults(format="json")

    p = argparse.ArgumentParser(prog="pbranch", description="Partition complexes, Young subgroups and the branching rule.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("witt", parents=[common], help="Witt numbers of multidegrees")
    s.add_argument("ns", nargs="+", help="compositions such as 4,4")
    s.set_defaults(func=cmd_witt)
    s = sub.add_parser("hall", parents=[common], help="Hall basic monomials of a multidegree")
    s.add_argument("ns", nargs="+")
    s.set_defaults(func=cmd_hall)
    s = sub.add_parser("homology", parents=[common], help="reduced homology: pi <n> | FILE | quotient|fixed --group SPEC pi <n>")
    s.add_argument("target", nargs="+")
    s.add_argument("--group", default=None, help="group spec, e.g. young:4,4")
    s.set_defaults(func=cmd_homology)
    s = sub.add_parser("verify", parents=[common], help="run a verifier; exit 1 on mismatch")
    s.add_argument("kind", choices=("branching", "barcelo", "collapse", "main", "fixedpoints", "quotients"))
    s.add_argument("arg", nargs="?", default=None)
    s.add_argument("--corpus", default="default", help="'default' or group specs separated by ';;'")
    s.set_defaults(func=cmd_verify)
    return p


def _apply_caps(args) -> dict:
    if args.max_faces is not None:
        _homology.MAX_FACES_Z = args.max_faces
        _homology.MAX_FACES_P = max(args.max_faces, _homology.MAX_FACES_P)
        _quotients.MAX_BLOCK_FACES = args.max_faces
    return {
        "max_faces_integral": _homology.MAX_FACES_Z,
        "max_faces_modular": _homology.MAX_FACES_P,
        "max_group_order": args.max_group_order,
    }


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    # positionals after an option, as in 'homology quotient --group G pi 8'
    if extra and args.command == "homology" and not any(t.startswith("-") for t in extra):
        args.target = list(args.target) + extra
    elif extra:
        parser.error(f"unrecognized arguments: {' '.join(extra)}")
    saved = (_homology.MAX_FACES_Z, _homology.MAX_FACES_P, _quotients.MAX_BLOCK_FACES)
    try:
        caps = _apply_caps(args)
        params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "format", "no_cache", "max_faces", "max_group_order")}

        def compute() -> tuple[dict, str]:
            details, result, evidence = args.func(args)
            return {**result, "input": details}, evidence

        rec = run_cached(args.command, params, caps, args.evidence, compute, use_cache=not args.no_cache)
    except ResourceError as exc:
        print(json.dumps({"error": "resource", "message": str(exc), "cap": getattr(exc, "cap", None)}, sort_keys=True), file=sys.stderr)
        return 2
    except (UsageError, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"pbranch: error: {exc}", file=sys.stderr)
        return 2
    finally:
        _homology.MAX_FACES_Z, _homology.MAX_FACES_P, _quotients.MAX_BLOCK_FACES = saved
    print(render(rec.payload(), args.format))
    return 1 if rec.result.get("passed") is False else 0


if __name__ == "__main__":
    sys.exit(main())
