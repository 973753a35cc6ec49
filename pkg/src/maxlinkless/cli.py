"""Command-line entry point: ``maxlinkless <command> ...``.

Exit codes: 0 when everything verified, 1 when a check or search produced a
counter-result, 2 for usage, parse and I/O errors.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import constructions as con
from .embedding import EmbeddingError, embedding_problems, format_coords, canonical_embedding_g, linkless_report, parse_coords
from .graph import Graph, GraphError, ParseError, add_edge, format_graph, parse_graph
from .minors import (
    K6,
    CertificateError,
    find_minor,
    format_certificates,
    format_model,
    has_k6_minor,
    is_intrinsically_linked,
    parse_certificates,
    petersen_family,
    verify_model,
    verify_partition_certificate,
)

OK, COUNTER, USAGE = 0, 1, 2

# verify-maximal on larger hosts with the Petersen family takes minutes to hours
DEEP_THRESHOLD = 16


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    jobs: int = 1
    deterministic: bool = False
    report: Path | None = None

    def __post_init__(self):
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        if self.deterministic:
            self.jobs = 1


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _load_graph(path: str) -> Graph:
    try:
        return parse_graph(_read(path))
    except (ParseError, GraphError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _emit(cfg: RunConfig, lines: list[str]) -> None:
    _write(str(cfg.report) if cfg.report else None, "\n".join(lines) + "\n")


# build -----------------------------------------------------------------------------

def cmd_build(args, cfg: RunConfig) -> int:
    what = args.what
    if what == "g":
        _write(args.output, format_graph(con.build_g(), ["maximally linkless graph G: n=13, m=31"]))
    elif what == "family":
        k = _int_arg(args.arg, "family needs a copy count K >= 1", minimum=1)
        h, rep = con.build_family(k)
        _write(args.output, format_graph(h, [f"{k} copies of G glued on PQR: n={rep.n}, m={rep.m}"]))
    elif what == "apex":
        n = _int_arg(args.arg, "apex needs a base size N >= 3", minimum=3)
        h = con.apex(con.stacked_triangulation(n))
        _write(args.output, format_graph(h, [f"apex over a stacked triangulation on {n} vertices"]))
    elif what == "petersen-family":
        family = petersen_family()
        if args.output:
            out = Path(args.output)
            try:
                out.mkdir(parents=True, exist_ok=True)
            except OSError as exc:
                raise UsageError(f"{out}: {exc.strerror}") from None
            for i, h in enumerate(family):
                _write(str(out / f"petersen-{i}.graph"), format_graph(h, [f"Petersen family member {i}"]))
        else:
            sys.stdout.write("\n".join(format_graph(h, [f"Petersen family member {i}"]) for i, h in enumerate(family)))
    elif what == "certificates":
        _write(args.output, format_certificates(con.g_certificates()))
    elif what == "embedding":
        _write(args.output, format_coords(con.build_g(), canonical_embedding_g()))
    return OK


def _int_arg(value, message: str, minimum: int) -> int:
    try:
        k = int(value)
    except (TypeError, ValueError):
        raise UsageError(message) from None
    if k < minimum:
        raise UsageError(message)
    return k


# verify-certificates ---------------------------------------------------------------

def cmd_verify_certificates(args, cfg: RunConfig) -> int:
    g = _load_graph(args.graph)
    try:
        certs = parse_certificates(_read(args.certs))
    except ParseError as exc:
        raise UsageError(f"{args.certs}: {exc}") from None
    lines = [f"graph: n={g.n} m={g.m}", f"certificates: {len(certs)}"]
    status = OK
    checks = []
    for cert in certs:
        try:
            check = verify_partition_certificate(g, cert)
        except CertificateError as exc:
            raise UsageError(f"{args.certs}: case {cert.case}: {exc}") from None
        checks.append(check)
        parts = " | ".join("".join(p) for p in cert.parts)
        if check.ok:
            names = ",".join(sorted(g.labels[u] + g.labels[v] for u, v in check.eliminated))
            lines.append(f"case {cert.case}: ok  [{parts}] eliminates {names}")
        else:
            status = COUNTER
            lines.append(f"case {cert.case}: FAIL [{parts}] " + "; ".join(check.problems))
    swap = con.prime_swap(g.labels)
    from .graph import is_automorphism

    if not is_automorphism(g, swap):
        swap = tuple(range(g.n))
        lines.append("orbits: identity (prime swap is not an automorphism)")
    table = con.non_edge_orbits(g, swap)
    lines.append(f"non-edges: {sum(len(o) for o in table.orbits)}; orbit representatives: {len(table.orbits)}")
    if status == OK:
        try:
            coverage = con.coverage_check(checks, table)
        except con.CoverageError as exc:
            lines.append(str(exc))
            status = COUNTER
            coverage = None
        if coverage is not None:
            lines.append(f"covered: {len(coverage)}/{len(table.orbits)}")
            lines.append("coverage:")
            for name, cases in coverage.items():
                lines.append(f"  {name}: {','.join(str(c) for c in sorted(cases))}")
            if g == con.build_g():
                same = coverage == con.G_COVERAGE
                lines.append(f"matches the known edge/case table: {'yes' if same else 'no'}")
                if not same:
                    status = COUNTER
    lines.append(f"result: {'verified' if status == OK else 'FAILED'}")
    _emit(cfg, lines)
    return status


# verify-maximal --------------------------------------------------------------------

def _witness(g: Graph, pattern: str):
    """``(found, description)`` for the requested obstruction in ``g``."""
    if pattern == "k6":
        model = has_k6_minor(g)
        if model is None:
            return False, "no K6 minor"
        assert verify_model(model)
        return True, "K6 minor " + _sets(model)
    hit = is_intrinsically_linked(g)
    if hit is None:
        return False, "no Petersen-family minor"
    index, model = hit
    assert verify_model(model)
    return True, f"Petersen-family member {index} minor " + _sets(model)


def _sets(model) -> str:
    return " | ".join("".join(model.host.names(s)) for s in model.branch_sets.values())


def _check_edge(task):
    g, u, v, pattern = task
    start = time.perf_counter()
    found, text = _witness(add_edge(g, u, v), pattern)
    return u, v, found, text, time.perf_counter() - start


def cmd_verify_maximal(args, cfg: RunConfig) -> int:
    g = _load_graph(args.graph)
    if args.pattern == "petersen" and g.n > DEEP_THRESHOLD and not args.deep:
        raise UsageError(f"Petersen-family search on {g.n} vertices is slow; pass --deep to run it")
    pairs = [(g.labels[u], g.labels[v]) for u, v in g.non_edges()]
    total = len(pairs)
    if args.sample is not None:
        if args.sample < 1:
            raise UsageError("--sample must be at least 1")
        rng = random.Random(args.seed)
        pairs = sorted(rng.sample(pairs, min(args.sample, len(pairs))), key=lambda p: (g.index(p[0]), g.index(p[1])))
    lines = [f"graph: n={g.n} m={g.m}", f"pattern: {args.pattern}", f"non-edges: {total}; checked: {len(pairs)}"]
    status = OK
    if not args.no_base:
        start = time.perf_counter()
        found, text = _witness(g, args.pattern)
        timing = "" if cfg.deterministic else f" ({time.perf_counter() - start:.3f}s)"
        lines.append(f"base graph: {text}{timing}")
        if found:
            status = COUNTER
    tasks = [(g, u, v, args.pattern) for u, v in pairs]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_check_edge, tasks))
    else:
        results = [_check_edge(t) for t in tasks]
    good = 0
    for u, v, found, text, secs in results:
        timing = "" if cfg.deterministic else f" ({secs:.3f}s)"
        lines.append(f"+{u}{v}: {text}{timing}")
        good += found
        if not found:
            status = COUNTER
    lines.append(f"augmented graphs with the minor: {good}/{len(pairs)}")
    lines.append(f"result: {'verified' if status == OK else 'FAILED'}")
    _emit(cfg, lines)
    return status


# find-minor --------------------------------------------------------------------------

def cmd_find_minor(args, cfg: RunConfig) -> int:
    pattern = _pattern(args.pattern)
    host = _load_graph(args.host)
    start = time.perf_counter()
    model = find_minor(pattern, host, strategy=args.strategy)
    lines = [f"pattern: n={pattern.n} m={pattern.m}", f"host: n={host.n} m={host.m}"]
    if not cfg.deterministic:
        lines.append(f"time: {time.perf_counter() - start:.3f}s")
    if model is None:
        lines.append("result: no minor")
        _emit(cfg, lines)
        return COUNTER
    lines.append("result: minor found")
    lines.extend(format_model(model).splitlines())
    if args.model_out:
        _write(args.model_out, format_model(model))
    _emit(cfg, lines)
    return OK


def _pattern(spec: str) -> Graph:
    if spec == "k6":
        return K6
    if spec.startswith("petersen-") and spec[9:].isdigit():
        family = petersen_family()
        i = int(spec[9:])
        if i >= len(family):
            raise UsageError(f"the Petersen family has {len(family)} members")
        return family[i]
    return _load_graph(spec)


# check-embedding -----------------------------------------------------------------------

def cmd_check_embedding(args, cfg: RunConfig) -> int:
    g = _load_graph(args.graph)
    try:
        e = parse_coords(_read(args.coords))
    except ParseError as exc:
        raise UsageError(f"{args.coords}: {exc}") from None
    try:
        problems = embedding_problems(g, e)
    except EmbeddingError as exc:
        raise UsageError(f"{args.coords}: {exc}") from None
    lines = [f"graph: n={g.n} m={g.m}"]
    if problems:
        lines.append("embedding: INVALID")
        lines.extend(f"  {p}" for p in problems)
        lines.append("result: FAILED")
        _emit(cfg, lines)
        return COUNTER
    lines.append("embedding: valid")
    start = time.perf_counter()
    try:
        report = linkless_report(g, e, directions=args.directions)
    except EmbeddingError as exc:
        lines.append(f"linking numbers: {exc}")
        lines.append("result: FAILED")
        _emit(cfg, lines)
        return COUNTER
    lines.extend(report.lines(g))
    if not cfg.deterministic:
        lines.append(f"time: {time.perf_counter() - start:.3f}s")
    ok = report.max_abs == 0 and report.direction_agreement
    lines.append(f"result: {'all linking numbers vanish' if ok else 'FAILED'}")
    _emit(cfg, lines)
    return OK if ok else COUNTER


# counts ------------------------------------------------------------------------------

def cmd_counts(args, cfg: RunConfig) -> int:
    g = _load_graph(args.graph)
    _emit(cfg, con.count_report(g).lines())
    return OK


# wiring --------------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="maxlinkless",
        description="Build maximally linkless graphs and verify their certificates.",
        epilog="exit codes: 0 verified, 1 counter-result, 2 usage/parse/IO error",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, search=False):
        p.add_argument("--report", help="write the report here instead of stdout")
        p.add_argument("--deterministic", action="store_true", help="stable output without timings; forces --jobs 1")
        if search:
            p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")

    p = sub.add_parser("build", help="write a graph, certificate or coordinate file")
    p.add_argument("what", choices=["g", "family", "apex", "petersen-family", "certificates", "embedding"])
    p.add_argument("arg", nargs="?", help="K for family, N for apex")
    p.add_argument("-o", "--output", help="output file (directory for petersen-family)")
    p.set_defaults(func=cmd_build)
    common(p)

    p = sub.add_parser("verify-certificates", help="check partition certificates and orbit coverage")
    p.add_argument("graph")
    p.add_argument("certs")
    p.set_defaults(func=cmd_verify_certificates)
    common(p)

    p = sub.add_parser("verify-maximal", help="minor absent in GRAPH, present after adding any non-edge")
    p.add_argument("graph")
    p.add_argument("--pattern", choices=["k6", "petersen"], default="k6")
    p.add_argument("--deep", action="store_true", help=f"allow Petersen-family search on hosts over {DEEP_THRESHOLD} vertices")
    p.add_argument("--sample", type=int, help="check only this many randomly chosen non-edges")
    p.add_argument("--seed", type=int, default=0, help="seed for --sample")
    p.add_argument("--no-base", action="store_true", help="skip the check on GRAPH itself")
    p.set_defaults(func=cmd_verify_maximal)
    common(p, search=True)

    p = sub.add_parser("find-minor", help="search PATTERN as a minor of HOST")
    p.add_argument("pattern", help="graph file, 'k6', or 'petersen-I'")
    p.add_argument("host")
    p.add_argument("--model-out", help="write the branch sets here")
    p.add_argument("--strategy", choices=["auto", "labeled", "partition"], default="auto")
    p.set_defaults(func=cmd_find_minor)
    common(p)

    p = sub.add_parser("check-embedding", help="validate coordinates and compute linking numbers")
    p.add_argument("graph")
    p.add_argument("coords")
    p.add_argument("--directions", type=int, default=3, help="projection directions to cross-check (default 3)")
    p.set_defaults(func=cmd_check_embedding)
    common(p)

    p = sub.add_parser("counts", help="vertex/edge counts against the known bounds")
    p.add_argument("graph")
    p.set_defaults(func=cmd_counts)
    common(p)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(
            args.command,
            jobs=getattr(args, "jobs", 1),
            deterministic=args.deterministic,
            report=Path(args.report) if args.report else None,
        )
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"maxlinkless: error: {exc}", file=sys.stderr)
        return USAGE
    except GraphError as exc:
        print(f"maxlinkless: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
