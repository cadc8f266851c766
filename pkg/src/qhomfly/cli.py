"""Command-line front end: evaluate, batch sequences, guess recurrences, and
run corpus cross-checks.

Exit codes: 0 success, 2 malformed input, 3 unclosable family, 4 resource
budget exceeded, 5 recurrence window too short.  Corpus check failures exit 1.

Results are JSON records carrying the scalar payload plus the inputs that
produced it; `sequence` caches per-color records under $QH_CACHE (default
~/.cache/qhomfly) keyed by (cf, color, start, normalize, engine version), so
re-runs and extensions resume instead of recomputing.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import os
import re
import sys
import tempfile

from . import oracle
from .holonomy import (
    ResourceBudgetError,
    SequenceWindow,
    guess_recurrence,
    validate,
)
from .nestedsum import nested_eval
from .scalar import QScalar
from .skein import (
    ENGINE_VERSION,
    UnclosableFamilyError,
    eval_reduced,
    select_start,
    specialize_two_component,
)
from .twobridge import (
    TwoBridgeLink,
    cf,
    enumerate_corpus,
    fraction_to_cf,
    link_from_cf,
    parse_cf,
    parse_fraction,
)

EXIT_BAD_INPUT = 2
EXIT_UNCLOSABLE = 3
EXIT_BUDGET = 4
EXIT_WINDOW = 5

CHECK_NAMES = ("homfly", "jones", "amphichiral", "integrality", "determinant",
               "nested-sum")


def _fail(message: str, code: int) -> "SystemExit":
    print(f"error: {message}", file=sys.stderr)
    return SystemExit(code)


def _parse_link(args) -> TwoBridgeLink:
    if bool(args.cf) == bool(args.fraction):
        raise _fail("supply exactly one of --cf or --fraction", EXIT_BAD_INPUT)
    try:
        if args.cf:
            c = parse_cf(args.cf)
        else:
            c = fraction_to_cf(*parse_fraction(args.fraction))
        return link_from_cf(c)
    except ValueError as exc:
        raise _fail(str(exc), EXIT_BAD_INPUT)


_MONOMIAL_RE = re.compile(r"(-?)(1|q(?:\^(-?\d+))?)$")


def _parse_signed_power(text: str):
    """'1', '-1', 'q', 'q^3', '-q^-2' -> (sign, exponent) of a q-monomial."""
    m = _MONOMIAL_RE.match(text.strip())
    if not m:
        return None
    sign = -1 if m.group(1) else 1
    if m.group(2) == "1":
        return (sign, 0)
    return (sign, int(m.group(3)) if m.group(3) else 1)


def _resolve_start(choice: str, link: TwoBridgeLink) -> str:
    if choice == "auto":
        return select_start(link)
    return choice.upper()


def _record(link, j, start, normalize, value, specialize=None) -> dict:
    rec = {
        "cf": list(link.cf.entries),
        "fraction": list(link.fraction),
        "components": link.components,
        "color": j,
        "start": start,
        "normalize": normalize,
        "engine_version": ENGINE_VERSION,
        "value": value.to_json_obj(),
    }
    if specialize:
        rec["specialize"] = list(specialize)
    return rec


def cmd_eval(args) -> int:
    link = _parse_link(args)
    j = args.color
    if j < 0:
        raise _fail("--color must be >= 0", EXIT_BAD_INPUT)
    start = _resolve_start(args.start, link)
    sub_a = sub_s = None
    i_color = None
    for expr in args.specialize or ():
        m = re.fullmatch(r"\s*([asi])\s*=\s*(.+?)\s*", expr)
        if not m:
            raise _fail(f"cannot parse --specialize {expr!r}", EXIT_BAD_INPUT)
        var, val = m.group(1), m.group(2)
        if var == "i":
            if not val.lstrip("-").isdigit():
                raise _fail(f"--specialize i= needs an integer, got {val!r}",
                            EXIT_BAD_INPUT)
            i_color = int(val)
        else:
            power = _parse_signed_power(val)
            if power is None:
                raise _fail(
                    f"--specialize {var}= needs 1 or a signed q-power, got {val!r}",
                    EXIT_BAD_INPUT)
            if var == "a":
                sub_a = power
            else:
                sub_s = power
    if i_color is not None:
        if sub_s is not None:
            raise _fail("--specialize i= already fixes s; drop the s= clause",
                        EXIT_BAD_INPUT)
        if link.components != 2:
            raise _fail("--specialize i= needs a two-component link",
                        EXIT_BAD_INPUT)
        if i_color < j:
            raise _fail(f"--specialize i= needs i >= color, got i={i_color} < {j}",
                        EXIT_BAD_INPUT)
    value = eval_reduced(link, j, start=start, normalize=args.normalize)
    if sub_a or sub_s:
        value = value.substitute(a=sub_a, s=sub_s)
    if i_color is not None:
        value = specialize_two_component(value, i_color, j)
    if args.format == "json":
        rec = _record(link, j, start, args.normalize, value, args.specialize)
        print(json.dumps(rec, separators=(",", ":"), sort_keys=True))
    else:
        print(value.format_text())
    return 0


# -- sequence ----------------------------------------------------------------

def _cache_dir() -> str:
    root = os.environ.get("QH_CACHE")
    if not root:
        base = os.environ.get("XDG_CACHE_HOME", os.path.expanduser("~/.cache"))
        root = os.path.join(base, "qhomfly")
    os.makedirs(root, exist_ok=True)
    return root


def _cache_key(entries, j, start, normalize) -> str:
    blob = json.dumps(
        {"cf": list(entries), "color": j, "start": start,
         "normalize": normalize, "engine": ENGINE_VERSION},
        separators=(",", ":"), sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _atomic_write(path: str, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sequence_task(task) -> tuple:
    entries, j, start, normalize = task
    link = link_from_cf(cf(*entries))
    value = eval_reduced(link, j, start=start, normalize=normalize)
    return j, _record(link, j, start, normalize, value)


def cmd_sequence(args) -> int:
    link = _parse_link(args)
    if args.max_color < 0:
        raise _fail("--max-color must be >= 0", EXIT_BAD_INPUT)
    start = _resolve_start(args.start, link)
    cache = _cache_dir()
    entries = link.cf.entries
    records: dict = {}
    missing = []
    for j in range(args.max_color + 1):
        path = os.path.join(cache, _cache_key(entries, j, start, args.normalize) + ".json")
        if os.path.exists(path):
            with open(path, "rb") as fh:
                records[j] = json.load(fh)
        else:
            missing.append(j)
    if missing:
        tasks = [(entries, j, start, args.normalize) for j in missing]
        if args.jobs > 1 and len(tasks) > 1:
            with concurrent.futures.ProcessPoolExecutor(
                    max_workers=min(args.jobs, len(tasks))) as pool:
                results = list(pool.map(_sequence_task, tasks))
        else:
            results = [_sequence_task(t) for t in tasks]
        for j, rec in results:
            records[j] = rec
            path = os.path.join(
                cache, _cache_key(entries, j, start, args.normalize) + ".json")
            _atomic_write(path, json.dumps(
                rec, separators=(",", ":"), sort_keys=True).encode())
    payload = json.dumps([records[j] for j in range(args.max_color + 1)],
                         separators=(",", ":"), sort_keys=True).encode()
    _atomic_write(args.out, payload)
    print(f"wrote {args.max_color + 1} records to {args.out}")
    return 0


# -- recurrence ---------------------------------------------------------------

def cmd_recurrence(args) -> int:
    try:
        with open(args.infile, "rb") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _fail(f"cannot read sequence file: {exc}", EXIT_BAD_INPUT)
    if not isinstance(data, list) or not data:
        raise _fail("sequence file must be a nonempty JSON array", EXIT_BAD_INPUT)
    try:
        pairs = [(rec["color"], QScalar.from_json_obj(rec["value"])) for rec in data]
        link_id = ",".join(str(e) for e in data[0]["cf"])
    except (KeyError, TypeError) as exc:
        raise _fail(f"malformed sequence record: {exc}", EXIT_BAD_INPUT)
    try:
        window = SequenceWindow.from_pairs(link_id, pairs)
    except ValueError as exc:
        raise _fail(str(exc), EXIT_BAD_INPUT)

    holdout = args.validate
    if holdout < 0 or holdout >= len(window):
        raise _fail("--validate must be >= 0 and smaller than the window",
                    EXIT_BAD_INPUT)
    fit = window.head(len(window) - holdout) if holdout else window
    try:
        op = guess_recurrence(fit, args.max_order, args.max_mdeg,
                              a_free=args.a_free, margin=args.margin)
    except ValueError as exc:
        need = (args.max_order + 1) * (args.max_mdeg + 1) + args.max_order + args.margin
        raise _fail(
            f"{exc}; certifying the full bounds needs >= {need} values",
            EXIT_WINDOW)
    except ResourceBudgetError as exc:
        raise _fail(str(exc), EXIT_BUDGET)

    if op is None:
        if args.format == "json":
            print(json.dumps({"operator": None}))
        else:
            print("none found")
        return 0
    report = validate(op, window, holdout) if holdout else None
    if args.format == "json":
        out = {"operator": op.to_json_obj()}
        if report is not None:
            out["validation"] = {
                "passed": report.passed,
                "checks": [[n, ok] for n, ok in report.checks],
            }
        print(json.dumps(out, separators=(",", ":"), sort_keys=True))
    else:
        print(op.format_text())
        if report is not None:
            for n, ok in report.checks:
                print(f"  n={n}: {'ok' if ok else 'FAIL'}")
            print(f"validation: {'pass' if report.passed else 'FAIL'}")
    return 0


# -- corpus -------------------------------------------------------------------

def _is_amphichiral_candidate(link: TwoBridgeLink) -> bool:
    p, q = link.fraction
    return link.components == 1 and (q * q) % p == p - 1


def _corpus_task(task) -> list:
    """One (check, cf) unit of corpus work; returns failure dicts."""
    name, entries, max_color = task
    link = link_from_cf(cf(*entries))
    c = link.cf
    fails = []

    def bad(color, detail):
        fails.append({"check": name, "cf": list(entries), "color": color,
                      "detail": detail})

    if name == "homfly":
        if link.components == 1:
            got = eval_reduced(link, 1)
            want = oracle.reduced_homfly(c).canonicalize()
            if got != want:
                bad(1, "engine != skein-recursion oracle")
        else:
            for pattern in ("UP", "OP"):
                got = eval_reduced(link, 1, start=pattern)
                flat = got.substitute(s=(1, 0)).canonicalize()
                want = oracle.reduced_homfly(c, pattern).canonicalize()
                if flat != want:
                    bad(1, f"engine != skein-recursion oracle ({pattern})")
    elif name == "jones":
        patterns = (None,) if link.components == 1 else ("UP", "OP")
        for pattern in patterns:
            value = eval_reduced(link, 1, start=pattern or "auto")
            spec = value.substitute(a=(1, 2), s=(1, 0))
            got = oracle.doubled_q(spec).canonicalize()
            want = oracle.jones(c, pattern).canonicalize()
            if got != want:
                bad(1, f"a=q^2 specialization != Kauffman-bracket Jones ({pattern})")
    elif name == "amphichiral":
        for j in range(1, max_color + 1):
            v = eval_reduced(link, j)
            if v != v.invert_variables().canonicalize():
                bad(j, "not invariant under variable inversion")
    elif name == "integrality":
        for j in range(1, max_color + 1):
            v = eval_reduced(link, j)
            if not v.is_integral():
                bad(j, f"denominator left: {v.format_text()}")
    elif name == "determinant":
        for j in range(1, max_color + 1):
            v = eval_reduced(link, j).substitute(a=(1, j))
            if not v.is_monomial():
                bad(j, f"a=q^{j} specialization is not a monomial")
    elif name == "nested-sum":
        for j in range(0, max_color + 1):
            got = eval_reduced(link, j, normalize="raw")
            want = nested_eval(link, j)
            if not (got.num == want.num and got.den == want.den):
                bad(j, "engine raw != nested-sum oracle (term-for-term)")
    return fails


def cmd_corpus(args) -> int:
    if args.max_crossings < 1:
        raise _fail("--max-crossings must be >= 1", EXIT_BAD_INPUT)
    checks = [c.strip() for c in args.checks.split(",")] if args.checks else list(CHECK_NAMES)
    for name in checks:
        if name not in CHECK_NAMES:
            raise _fail(f"unknown check {name!r}; choose from {', '.join(CHECK_NAMES)}",
                        EXIT_BAD_INPUT)
    corpus = enumerate_corpus(args.max_crossings)
    tasks = []
    for name in checks:
        for link in corpus:
            if name == "amphichiral" and not _is_amphichiral_candidate(link):
                continue
            if name in ("integrality", "determinant") and link.components != 1:
                continue
            if name == "determinant" and sum(link.cf.entries) > 6:
                continue
            if name == "nested-sum" and sum(link.cf.entries) > 4:
                continue
            tasks.append((name, link.cf.entries, args.max_color))
    if args.jobs > 1 and len(tasks) > 1:
        with concurrent.futures.ProcessPoolExecutor(
                max_workers=min(args.jobs, len(tasks))) as pool:
            buckets = list(pool.map(_corpus_task, tasks, chunksize=4))
    else:
        buckets = [_corpus_task(t) for t in tasks]
    failures = [f for bucket in buckets for f in bucket]
    summary = {
        "max_crossings": args.max_crossings,
        "max_color": args.max_color,
        "checks": checks,
        "cases": len(tasks),
        "failures": failures,
        "passed": not failures,
    }
    print(json.dumps(summary, separators=(",", ":"), sort_keys=True))
    return 0 if not failures else 1


# -- entry point ----------------------------------------------------------------

def _add_link_args(p):
    p.add_argument("--cf", help="continued fraction, e.g. 3 or 2,1,2")
    p.add_argument("--fraction", help="rational form p/q, e.g. 7/2")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qhomfly",
        description="Colored HOMFLY evaluation for 2-bridge links",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one link at one color")
    _add_link_args(p)
    p.add_argument("--color", type=int, required=True)
    p.add_argument("--start", choices=("auto", "up", "op"), default="auto",
                   help="strand orientation pattern (auto traces the diagram)")
    p.add_argument("--normalize", choices=("canonical", "raw"), default="canonical")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--specialize", action="append", metavar="EXPR",
                   help="s=1, a=q^2, or i=N (repeatable)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sequence", help="evaluate colors 0..J into a JSON file")
    _add_link_args(p)
    p.add_argument("--max-color", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--start", choices=("auto", "up", "op"), default="auto")
    p.add_argument("--normalize", choices=("canonical", "raw"), default="canonical")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_sequence)

    p = sub.add_parser("recurrence", help="guess a q-recurrence from a sequence file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--max-mdeg", type=int, required=True)
    p.add_argument("--validate", type=int, default=0,
                   help="hold out this many trailing values for validation")
    p.add_argument("--a-free", action="store_true",
                   help="restrict coefficients to q only (no a)")
    p.add_argument("--margin", type=int, default=4,
                   help="extra equations required beyond unknowns")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_recurrence)

    p = sub.add_parser("corpus", help="run cross-checks over all small links")
    p.add_argument("--max-crossings", type=int, required=True)
    p.add_argument("--checks", help=f"comma list from: {', '.join(CHECK_NAMES)}")
    p.add_argument("--max-color", type=int, default=2,
                   help="color ceiling for the per-color checks")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except UnclosableFamilyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNCLOSABLE
    except ResourceBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OverflowError as exc:
        print(f"error: exponent range exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
