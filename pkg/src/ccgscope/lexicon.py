"""Lexicon: fixed entries plus determiner entries generated by type raising.

A lexicon file holds three kinds of lines (``#`` starts a comment):

    lexeme tokens :: category
    @tset cat, cat, ...
    @raise word [word ...] sg|pl q-sym s-sym

``@raise`` expands a determiner into its full entry family over the
declared type set: a plain set-denoting entry np:num(s-sym(N), sg|pl)/n:N,
a pair of narrow-scope raised entries per type T (forward and backward),
and a pair of wide-scope quantifier entries per type T whose final result
is s.  Expansion happens after the whole file is read, against the last
@tset.  The num(...) wrapper on every determiner-built np carries the
determiner's grammatical number; verb subject slots that require a number
state it there, so mismatches fail in unification.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, List, Optional, Tuple

from .categories import (
    Atomic,
    Category,
    CatError,
    Slash,
    cat_key,
    cat_vars,
    parse_cat,
    replace_result_sem,
    result_atomic,
    standardize_apart,
)
from .terms import Atom, Compound, Lam, TermError, Var


class LexiconError(Exception):
    """Raised for malformed lexicon files or failed lookups."""


class UnknownTokenError(LexiconError):
    """No lexicon entry matches the token at this position."""


@dataclass(frozen=True)
class LexEntry:
    lexeme: tuple
    cat: Category
    tag: str


def _fresh_var(stem: str, taken: set) -> Var:
    if stem not in taken:
        return Var(stem)
    n = 2
    while f"{stem}{n}" in taken:
        n += 1
    return Var(f"{stem}{n}")


def instantiate_raised(lexeme: Tuple[str, ...], num: str, qsym: str, ssym: str,
                       tset: Iterable[Category]) -> List[LexEntry]:
    """All determiner entries for one @raise declaration.

    Order: plain entry first, then per type T (declaration order) the
    narrow forward, narrow backward, wide forward, wide backward entries.
    Wide entries exist only for types whose result-most atomic has sort s;
    duplicates (by category key) are dropped.  Every np the determiner
    builds carries num(sem, sg|pl) so verbs can state subject agreement.
    """
    if num not in ("sg", "pl"):
        raise LexiconError(f"number must be sg or pl, not {num!r}")
    tag = " ".join(lexeme)
    out: List[LexEntry] = []
    seen = set()

    def push(cat: Category) -> None:
        key = cat_key(cat)
        if key not in seen:
            seen.add(key)
            out.append(LexEntry(lexeme, cat, tag))

    def np_of(sem) -> Atomic:
        return Atomic("np", Compound("num", (sem, Atom(num))))

    n_var = Var("N")
    plain = Slash("/", np_of(Compound(ssym, (n_var,))), Atomic("n", n_var))
    push(plain)

    for t in tset:
        taken = {v.id for v in cat_vars(t)}
        nv = _fresh_var("N", taken)
        np_narrow = np_of(Compound(ssym, (nv,)))
        # One shared copy of T: the argument's inner T and the result T
        # carry the same variables, so applying the entry threads the
        # embedded functor's semantics straight through.
        push(Slash("/", Slash("/", t, Slash("\\", t, np_narrow)), Atomic("n", nv)))
        push(Slash("/", Slash("\\", t, Slash("/", t, np_narrow)), Atomic("n", nv)))

        if result_atomic(t).sort != "s":
            continue
        core = result_atomic(t).sem
        if not isinstance(core, Var):
            raise LexiconError(f"type set entry {cat_key(t)} has a non-variable result")
        vv = _fresh_var("V", taken)
        t_out = replace_result_sem(t, Compound(qsym, (vv, nv, core)))
        np_wide = np_of(vv)
        n_prop = Atomic("n", Lam(vv, nv))
        push(Slash("/", Slash("/", t_out, Slash("\\", t, np_wide)), n_prop))
        push(Slash("/", Slash("\\", t_out, Slash("/", t, np_wide)), n_prop))
    return out


class Lexicon:
    def __init__(self) -> None:
        self.entries: List[LexEntry] = []
        self._by_first: dict = {}
        self._fresh = itertools.count(1)

    def add(self, entry: LexEntry) -> None:
        key = (entry.lexeme, cat_key(entry.cat))
        if any((e.lexeme, cat_key(e.cat)) == key for e in self._by_first.get(entry.lexeme[0], ())):
            warnings.warn(f"duplicate lexicon entry for {' '.join(entry.lexeme)!r}")
            return
        self.entries.append(entry)
        self._by_first.setdefault(entry.lexeme[0], []).append(entry)

    def lookup(self, tokens: Tuple[str, ...], i: int) -> List[Tuple[LexEntry, int]]:
        """Entries whose lexeme matches tokens[i:], with variables freshened.

        Returns (entry, consumed) pairs; raises UnknownTokenError when
        nothing matches at this position.
        """
        matches = []
        for entry in self._by_first.get(tokens[i], ()):
            k = len(entry.lexeme)
            if tuple(tokens[i:i + k]) == entry.lexeme:
                fresh = standardize_apart(entry.cat, self._fresh)
                matches.append((LexEntry(entry.lexeme, fresh, entry.tag), k))
        if not matches:
            raise UnknownTokenError(f"unknown token {tokens[i]!r} at position {i}")
        return matches


def load_lexicon(text: str) -> Lexicon:
    lex = Lexicon()
    tset: List[Category] = []
    raises: List[Tuple[int, Tuple[str, ...], str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("@tset"):
                body = line[len("@tset"):].strip()
                tset = [parse_cat(part.strip()) for part in _split_top(body)]
            elif line.startswith("@raise"):
                fields = line.split()
                if len(fields) < 5:
                    raise LexiconError(
                        "@raise needs a lexeme, a number (sg|pl), a q-symbol and an s-symbol")
                raises.append((lineno, tuple(fields[1:-3]), fields[-3], fields[-2], fields[-1]))
            elif "::" in line:
                lhs, rhs = line.split("::", 1)
                lexeme = tuple(lhs.split())
                if not lexeme:
                    raise LexiconError("empty lexeme")
                lex.add(LexEntry(lexeme, parse_cat(rhs.strip()), " ".join(lexeme)))
            else:
                raise LexiconError("expected 'lexeme :: category', @tset or @raise")
        except (CatError, TermError, LexiconError) as exc:
            raise LexiconError(f"line {lineno}: {exc}") from exc
    for lineno, lexeme, num, qsym, ssym in raises:
        try:
            if not lexeme:
                raise LexiconError("empty lexeme")
            for entry in instantiate_raised(lexeme, num, qsym, ssym, tset):
                lex.add(entry)
        except LexiconError as exc:
            raise LexiconError(f"line {lineno}: {exc}") from exc
    return lex


def _split_top(body: str) -> List[str]:
    """Split on commas not enclosed in parentheses."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(body[start:i])
            start = i + 1
    tail = body[start:].strip()
    if tail:
        parts.append(tail)
    return [p for p in (part.strip() for part in parts) if p]


def default_lexicon() -> Lexicon:
    text = resources.files("ccgscope").joinpath("data/fragment.lex").read_text(encoding="utf-8")
    return load_lexicon(text)
