"""Command-line front end.

Commands: parse, readings, derive, compare, corpus.  Exit codes: 0 on
success, 1 when a sentence has no full-span derivation, 2 for usage,
lexicon, or unknown-token problems, 3 when a corpus run has mismatches.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from importlib import resources
from typing import List, Optional

from .baseline import BaselineError, compare, nesting_order, parse_skeleton
from .categories import CatError, canonical_cat, cat_key, format_cat, parse_cat
from .chart import ResourceError, count_derivations, derivations, parse, pretty
from .lexicon import LexiconError, UnknownTokenError, default_lexicon, load_lexicon
from .readings import NoParseError, readings, scope_profile
from .terms import format_term

_WORD = re.compile(r"[a-z0-9-]+|,")


def tokenize(text: str) -> List[str]:
    """Lowercase words plus standalone commas; other punctuation dropped."""
    return _WORD.findall(text.lower())


def _data_text(name: str) -> str:
    return resources.files("ccgscope").joinpath(f"data/{name}").read_text(
        encoding="utf-8")


def _load_lexicon(path: Optional[str]):
    if path is None:
        return default_lexicon()
    with open(path, encoding="utf-8") as f:
        return load_lexicon(f.read())


def _shape(cat) -> str:
    return format_cat(canonical_cat(cat), with_sems=False)


# --- commands ---------------------------------------------------------------

def _cmd_parse(args, lex, out) -> int:
    tokens = tokenize(args.sentence)
    chart = parse(tokens, lex)
    items = sorted(chart.full_span(), key=lambda it: cat_key(it.cat))
    counts = count_derivations(chart)
    if args.json:
        doc = {"sentence": args.sentence, "tokens": tokens,
               "items": [{"cat": cat_key(it.cat), "derivations": counts[it.id]}
                         for it in items]}
        print(json.dumps(doc, indent=2), file=out)
    else:
        print(" ".join(tokens), file=out)
        for it in items:
            print(f"  {cat_key(it.cat)}  [{counts[it.id]} derivations]", file=out)
    if not items:
        print("no full-span constituent", file=sys.stderr)
        return 1
    return 0


def _reading_doc(tokens, rs):
    return {
        "sentence": " ".join(tokens),
        "tokens": list(tokens),
        "readings": [{
            "lf": format_term(r.term),
            "multiplicity": r.multiplicity,
            "outscopes": sorted([a, b] for a, b in scope_profile(r.term)),
        } for r in rs],
        "derivation_count": sum(r.multiplicity for r in rs),
    }


def _cmd_readings(args, lex, out) -> int:
    tokens = tokenize(args.sentence)
    rs = readings(tokens, lex)
    if args.json:
        print(json.dumps(_reading_doc(tokens, rs), indent=2), file=out)
    else:
        print(f"{len(rs)} readings of: {' '.join(tokens)}", file=out)
        for r in rs:
            print(f"  x{r.multiplicity}  {format_term(r.term)}", file=out)
            for a, b in sorted(scope_profile(r.term)):
                print(f"        {a} > {b}", file=out)
    return 0


def _cmd_derive(args, lex, out) -> int:
    tokens = tokenize(args.sentence)
    chart = parse(tokens, lex)
    items = sorted(chart.full_span(), key=lambda it: cat_key(it.cat))
    if not items:
        print("no full-span constituent", file=sys.stderr)
        return 1
    shown = 0
    for it in items:
        for tree in derivations(chart, it):
            if shown >= args.max_derivations:
                print(f"... display capped at {args.max_derivations}", file=out)
                return 0
            print(pretty(chart, tree), file=out)
            print(file=out)
            shown += 1
    return 0


def _skeleton_table(path: Optional[str]):
    text = _data_text("corpus.skel") if path is None else \
        open(path, encoding="utf-8").read()
    table = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if not line:
            continue
        sent, skel = line.split("\t", 1)
        table[" ".join(tokenize(sent))] = parse_skeleton(skel.strip())
    return table

def _cmd_compare(args, lex, out) -> int:
    tokens = tokenize(args.sentence)
    table = _skeleton_table(args.skeletons)
    key = " ".join(tokens)
    if key not in table:
        print(f"no skeleton for: {key}", file=sys.stderr)
        return 2
    report = compare(tokens, table[key], lex)
    if args.json:
        doc = {"sentence": key, "tokens": tokens,
               "enumerated": len(report.enumerated),
               "uvc": len(report.survivors),
               "ccg": len(report.ccg),
               "gap": [list(nesting_order(f)) for f in report.gap]}
        print(json.dumps(doc, indent=2), file=out)
    else:
        print(f"baseline orders: {len(report.enumerated)}", file=out)
        print(f"uvc survivors:   {len(report.survivors)}", file=out)
        print(f"derived readings: {len(report.ccg)}", file=out)
        if report.gap:
            print("orders no derivation realizes:", file=out)
            for f in report.gap:
                print(f"  {' > '.join(nesting_order(f))}", file=out)
                print(f"    {format_term(f)}", file=out)
        else:
            print("every surviving order is realized", file=out)
    return 0


def _cmd_corpus(args, lex, out) -> int:
    text = _data_text("corpus.txt") if args.path is None else \
        open(args.path, encoding="utf-8").read()
    failures = 0
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if not line:
            continue
        expect, sent = line.split("\t", 1)
        if expect == "UNGRAMMATICAL":
            fragment, shape_text = (part.strip() for part in sent.split("⊣"))
            tokens = tokenize(fragment)
            chart = parse(tokens, lex)
            shape = _shape(parse_cat(shape_text))
            hits = [it for it in chart.full_span() if _shape(it.cat) == shape]
            ok = not hits
            rows.append((ok, "none", f"{len(hits)} items", fragment + " ⊣ " + shape_text))
        else:
            tokens = tokenize(sent)
            try:
                got = str(len(readings(tokens, lex)))
            except NoParseError:
                got = "no parse"
            ok = got == expect
            rows.append((ok, expect, got, sent))
        failures += 0 if rows[-1][0] else 1
    width = max(len(r[1]) for r in rows)
    for ok, expect, got, sent in rows:
        mark = "PASS" if ok else "FAIL"
        print(f"{mark}  expected {expect:>{width}}  got {got:>{width}}  {sent}",
              file=out)
    print(f"{len(rows) - failures}/{len(rows)} corpus entries pass", file=out)
    return 3 if failures else 0


# --- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ccgscope",
        description="Parse a fixed English fragment and enumerate its "
                    "scoped readings.")
    ap.add_argument("--lexicon", metavar="PATH",
                    help="lexicon file (default: bundled fragment)")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="show full-span categories")
    p.add_argument("sentence")
    p = sub.add_parser("readings", help="enumerate canonical scoped readings")
    p.add_argument("sentence")
    p = sub.add_parser("derive", help="print derivation trees")
    p.add_argument("sentence")
    p.add_argument("--max-derivations", type=int, default=10, metavar="N")
    p = sub.add_parser("compare", help="quantifier-ordering baseline vs readings")
    p.add_argument("sentence")
    p.add_argument("--skeletons", metavar="PATH",
                   help="skeleton file (default: bundled)")
    p = sub.add_parser("corpus", help="run the expected-count corpus")
    p.add_argument("path", nargs="?", help="corpus file (default: bundled)")
    return ap


_DISPATCH = {
    "parse": _cmd_parse,
    "readings": _cmd_readings,
    "derive": _cmd_derive,
    "compare": _cmd_compare,
    "corpus": _cmd_corpus,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        lex = _load_lexicon(args.lexicon)
    except (OSError, LexiconError) as exc:
        print(f"lexicon error: {exc}", file=sys.stderr)
        return 2
    try:
        return _DISPATCH[args.command](args, lex, sys.stdout)
    except NoParseError as exc:
        print(f"no parse: {exc}", file=sys.stderr)
        return 1
    except (UnknownTokenError, BaselineError, CatError, LexiconError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ResourceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
