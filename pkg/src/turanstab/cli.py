"""Command-line entry point: generate | verify | decompose | oracle | experiment.

Exit codes: 0 every check passed, 1 a property failed or a search was
refused at its cap, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path

from .constructions import FinalParams, ParameterError, build_G_rs, build_H_rst, verify_aux_properties
from .formats import ParseError, read_graph, write_graph
from .graph import Graph, PartitionedGraph
from .oracles import DEFAULT_ORACLE_CAP, brute_g_r, brute_g_star, definition_level_saturation
from .randomized import RandomBuildParams, build_random, format_report
from .stability import format_certificate, parse_certificate, stability_decompose, validate_certificate
from .turan import ContractViolation, is_saturated, turan_graph, turan_number

log = logging.getLogger("turanstab")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FAMILIES = ("g_rs", "h_rst", "turan", "random")
CSV_COLUMNS = (
    "family", "r", "s", "t", "n", "delta", "seed", "m", "e",
    "removed_total", "g_r", "oracle_exact", "g_star", "error", "runtime",
)


class UsageError(Exception):
    pass


# descriptors ------------------------------------------------------------------------

@dataclass(frozen=True)
class Descriptor:
    """One-line record of how a graph was generated: ``family r s t n seed [delta=p/q]``."""

    family: str
    r: int
    s: int | None = None
    t: int | None = None
    n: int | None = None
    seed: int | None = None
    delta: Fraction | None = None

    def to_text(self) -> str:
        f = lambda x: "-" if x is None else str(x)
        parts = [self.family, str(self.r), f(self.s), f(self.t), f(self.n), f(self.seed)]
        if self.delta is not None:
            parts.append(f"delta={self.delta}")
        return " ".join(parts) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Descriptor":
        parts = text.split()
        if len(parts) not in (6, 7) or parts[0] not in FAMILIES:
            raise ParseError(f"bad descriptor {text.strip()!r}")
        g = lambda x: None if x == "-" else int(x)
        delta = None
        if len(parts) == 7:
            if not parts[6].startswith("delta="):
                raise ParseError(f"bad descriptor token {parts[6]!r}")
            delta = Fraction(parts[6][6:])
        try:
            return cls(parts[0], int(parts[1]), g(parts[2]), g(parts[3]), g(parts[4]), g(parts[5]), delta)
        except ValueError as exc:
            raise ParseError(f"bad descriptor {text.strip()!r}: {exc}") from None


def _sidecar(path: Path) -> Descriptor | None:
    desc = path.with_suffix(".desc")
    if desc.exists():
        return Descriptor.parse(desc.read_text(encoding="utf-8"))
    return None


def _load(path: str, fmt: str | None) -> tuple[Graph, Descriptor | None]:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"no such file: {path}")
    return read_graph(p, fmt), _sidecar(p)


def _resolve_r(args, desc: Descriptor | None) -> int:
    if args.r is not None:
        return args.r
    if desc is not None:
        return desc.r
    raise UsageError("--r is required (no descriptor next to the graph file)")


# generate ---------------------------------------------------------------------------

def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.family} needs {' '.join(missing)}")


def build_family(desc: Descriptor, rounding: str = "ceil") -> tuple[Graph, str | None]:
    """Graph for a descriptor, plus a report text for random builds."""
    if desc.family == "g_rs":
        return build_G_rs(desc.r, desc.s).graph, None
    if desc.family == "h_rst":
        return build_H_rst(FinalParams(desc.r, desc.s, desc.t, desc.n)).graph, None
    if desc.family == "turan":
        return turan_graph(desc.r, desc.n).graph, None
    b = build_random(RandomBuildParams(desc.r, desc.delta, desc.n, desc.seed or 0, rounding, desc.s, desc.t))
    return b.graph, format_report(b.report)


def cmd_generate(args) -> int:
    fam = args.family
    if fam == "g_rs":
        _need(args, "r", "s")
        desc = Descriptor(fam, args.r, args.s)
    elif fam == "h_rst":
        _need(args, "r", "s", "t", "n")
        desc = Descriptor(fam, args.r, args.s, args.t, args.n)
    elif fam == "turan":
        _need(args, "r", "n")
        desc = Descriptor(fam, args.r, n=args.n)
    else:
        _need(args, "r", "delta", "n")
        desc = Descriptor(fam, args.r, args.s, args.t, args.n, args.seed, _fraction(args.delta))
    try:
        g, report = build_family(desc, args.rounding)
    except (ParameterError, ValueError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.out or _default_name(desc))
    out.parent.mkdir(parents=True, exist_ok=True)
    write_graph(g, out.with_suffix(".g6"), "g6")
    write_graph(g, out.with_suffix(".edges"), "edgelist")
    out.with_suffix(".desc").write_text(desc.to_text(), encoding="utf-8", newline="\n")
    if report is not None:
        out.with_suffix(".report").write_text(report, encoding="utf-8", newline="\n")
    print(f"wrote {out.with_suffix('.g6')} (n={g.n}, e={g.m})")
    return EXIT_OK


def _default_name(desc: Descriptor) -> str:
    bits = [desc.family, f"r{desc.r}"]
    for key in ("s", "t", "n", "seed"):
        v = getattr(desc, key)
        if v is not None:
            bits.append(f"{key}{v}")
    return "_".join(bits)


def _fraction(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot read {text!r} as a number") from None


# verify -----------------------------------------------------------------------------

def cmd_verify(args) -> int:
    g, desc = _load(args.path, args.format)
    r = _resolve_r(args, desc)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = set(checks) - {"aux_properties", "saturation", "certificate", "oracle"}
    if unknown:
        raise UsageError(f"unknown checks: {', '.join(sorted(unknown))}")
    results: list[tuple[str, str, str]] = []  # (check, pass|fail|refused, detail)

    for check in checks:
        if check == "aux_properties":
            s = args.s if args.s is not None else (desc.s if desc else None)
            if s is None:
                raise UsageError("aux_properties needs --s or a g_rs descriptor")
            ref = build_G_rs(r, s)
            if ref.graph.n != g.n:
                results.append((check, "fail", f"graph has {g.n} vertices, G_{{{r},{s}}} has {ref.graph.n}"))
                continue
            rep = verify_aux_properties(r, s, PartitionedGraph(g, ref.classes))
            results.append((check, "pass" if rep.passed else "fail", rep.summary()))
        elif check == "saturation":
            ok = is_saturated(g, r)
            detail = f"{r + 1}-saturated" if ok else f"not {r + 1}-saturated"
            if g.n <= 64 and definition_level_saturation(g, r) != ok:
                ok, detail = False, "saturation predicates disagree"
            results.append((check, "pass" if ok else "fail", detail))
        elif check == "certificate":
            if args.cert:
                try:
                    cert = parse_certificate(Path(args.cert).read_text(encoding="utf-8"))
                except (OSError, ValueError) as exc:
                    raise ParseError(f"cannot read certificate {args.cert}: {exc}") from None
            else:
                try:
                    cert = stability_decompose(g, r)
                except ContractViolation as exc:
                    results.append((check, "fail", str(exc)))
                    continue
            res = validate_certificate(g, cert)
            results.append((check, "pass" if res.ok else "fail", "valid" if res.ok else "; ".join(res.reasons[:5])))
        else:
            rep = brute_g_r(g, r, cap=args.cap)
            if rep.capped:
                results.append((check, "refused", f"n={g.n} exceeds oracle cap {args.cap}"))
                continue
            detail = [f"g_r={rep.g_value}"]
            ok = True
            try:
                cert = stability_decompose(g, r)
                ok = rep.g_value <= cert.removed_total
                detail.append(f"engine={cert.removed_total}")
            except ContractViolation:
                detail.append("engine skipped (not saturated)")
            star = brute_g_star(g, r, cap=args.cap)
            if not star.capped:
                ok = ok and rep.g_value <= star.g_value
                detail.append(f"g_star={star.g_value}")
            if desc is not None and desc.family == "h_rst":
                need = 2 * desc.t * desc.s ** (desc.r - 1)
                ok = ok and rep.g_value >= need
                detail.append(f"lower={need}")
            results.append((check, "pass" if ok else "fail", " ".join(detail)))

    text = "".join(f"{c}: {status} ({detail})\n" for c, status, detail in results)
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    return EXIT_OK if all(s == "pass" for _, s, _ in results) else EXIT_FAIL


# decompose / oracle ------------------------------------------------------------------

def cmd_decompose(args) -> int:
    g, desc = _load(args.path, args.format)
    r = _resolve_r(args, desc)
    try:
        cert = stability_decompose(g, r)
    except ContractViolation as exc:
        print(f"cannot decompose: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = format_certificate(cert)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK if validate_certificate(g, cert).ok else EXIT_FAIL


def cmd_oracle(args) -> int:
    g, desc = _load(args.path, args.format)
    r = _resolve_r(args, desc)
    kinds = ("g_r", "g_star") if args.kind == "both" else (args.kind,)
    reports = []
    for kind in kinds:
        fn = brute_g_r if kind == "g_r" else brute_g_star
        reports.append(fn(g, r, cap=args.cap, instance=Path(args.path).name))
    text = "\n".join(rep.to_text() for rep in reports)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    if any(rep.capped for rep in reports):
        print(f"refused: n={g.n} exceeds oracle cap {args.cap}; reported values are bounds", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# experiment --------------------------------------------------------------------------

def expand_grid(spec: dict) -> list[dict]:
    """Grid points in a fixed order: explicit ``points`` first, then the product over ``grid``."""
    family = spec.get("family")
    if family not in FAMILIES:
        raise UsageError(f"experiment family must be one of {', '.join(FAMILIES)}")
    points = [dict(p) for p in spec.get("points", [])]
    grid = spec.get("grid", {})
    if grid:
        keys = sorted(grid)
        for values in product(*(grid[k] for k in keys)):
            points.append(dict(zip(keys, values)))
    seeds = spec.get("seeds", [0]) if family == "random" else [None]
    out = []
    for p in points:
        for seed in seeds:
            q = {"family": family, **p}
            if seed is not None and "seed" not in p:
                q["seed"] = seed
            out.append(q)
    return out


def run_point(point: dict, cap: int) -> dict:
    row = {k: "" for k in CSV_COLUMNS}
    for k in ("family", "r", "s", "t", "n", "delta", "seed"):
        if point.get(k) is not None:
            row[k] = str(point[k])
    start = time.perf_counter()
    try:
        desc = Descriptor(
            point["family"], int(point["r"]), point.get("s"), point.get("t"), point.get("n"),
            point.get("seed"), Fraction(str(point["delta"])) if point.get("delta") is not None else None,
        )
        g, _ = build_family(desc)
        r = desc.r
        row["n"] = str(g.n)
        row["e"] = str(g.m)
        row["m"] = str(turan_number(r, g.n) - g.m)
        row["removed_total"] = str(stability_decompose(g, r).removed_total)
        rep = brute_g_r(g, r, cap=cap)
        row["g_r"] = str(rep.g_value)
        row["oracle_exact"] = "false" if rep.capped else "true"
        star = brute_g_star(g, r, cap=cap)
        if not star.capped:
            row["g_star"] = str(star.g_value)
    except Exception as exc:  # per-row failures go to the error column
        row["error"] = f"{type(exc).__name__}: {exc}".replace("\n", " ")
    row["runtime"] = f"{time.perf_counter() - start:.3f}"
    return row


def _checkpoint_rows(path: Path) -> dict[int, dict]:
    done = {}
    if path.exists():
        for ln in path.read_text(encoding="utf-8").splitlines():
            try:
                rec = json.loads(ln)
                done[int(rec["index"])] = rec["row"]
            except (ValueError, KeyError):
                continue  # a torn final line from an interrupted run
    return done


def run_experiment(spec: dict, out: Path, workers: int = 1, cap: int = DEFAULT_ORACLE_CAP) -> tuple[int, int]:
    """Run a sweep; returns (rows, rows with errors)."""
    points = expand_grid(spec)
    cap = int(spec.get("cap", cap))
    ckpt = out.with_name(out.name + ".ckpt")
    done = _checkpoint_rows(ckpt)
    todo = [i for i in range(len(points)) if i not in done]
    with ckpt.open("a", encoding="utf-8") as fh:
        def record(i, row):
            done[i] = row
            fh.write(json.dumps({"index": i, "row": row}, sort_keys=True) + "\n")
            fh.flush()

        if workers > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = {i: pool.submit(run_point, points[i], cap) for i in todo}
                for i in todo:
                    record(i, futures[i].result())
                    log.debug("point %d done", i)
        else:
            for i in todo:
                record(i, run_point(points[i], cap))

    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for i in range(len(points)):
        w.writerow(done[i])
    out.write_text(buf.getvalue(), encoding="utf-8", newline="\n")
    ckpt.unlink()
    errors = sum(1 for i in range(len(points)) if done[i].get("error"))
    return len(points), errors


def cmd_experiment(args) -> int:
    try:
        spec = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read experiment spec: {exc}") from None
    out = Path(args.out or spec.get("output", "experiment.csv"))
    rows, errors = run_experiment(spec, out, args.workers, args.cap)
    print(f"wrote {rows} rows to {out}")
    if errors:
        print(f"warning: {errors} rows carry errors", file=sys.stderr)
    return EXIT_OK


# parser ---------------------------------------------------------------------------------

def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--cap", type=int, default=DEFAULT_ORACLE_CAP, help="oracle vertex cap")
    common.add_argument("--out", help="output path")
    common.add_argument("--format", choices=("g6", "edgelist"), help="graph file format (default: by suffix)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="turanstab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="build a graph family member")
    g.add_argument("family", choices=FAMILIES)
    for name in ("r", "s", "t", "n"):
        g.add_argument(f"--{name}", type=int)
    g.add_argument("--delta")
    g.add_argument("--rounding", choices=("ceil", "floor"), default="ceil")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", parents=[common], help="run property checks on a graph file")
    v.add_argument("path")
    v.add_argument("--checks", default="saturation")
    v.add_argument("--r", type=int)
    v.add_argument("--s", type=int)
    v.add_argument("--cert", help="certificate file for the certificate check")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("decompose", parents=[common], help="write a stability certificate")
    d.add_argument("path")
    d.add_argument("--r", type=int)
    d.set_defaults(func=cmd_decompose)

    o = sub.add_parser("oracle", parents=[common], help="exact g_r / g*_r by search")
    o.add_argument("path")
    o.add_argument("--r", type=int)
    o.add_argument("--kind", choices=("g_r", "g_star", "both"), default="g_r")
    o.set_defaults(func=cmd_oracle)

    e = sub.add_parser("experiment", parents=[common], help="parameter sweep to CSV")
    e.add_argument("spec", help="JSON experiment spec")
    e.add_argument("--workers", type=int, default=1)
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
