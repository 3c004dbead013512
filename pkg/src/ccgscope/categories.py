"""Directional categories whose atomic parts carry logical-form terms.

Syntax: slashes are left-associative, parentheses override, and a term
annotation ``:term`` may follow an atomic sort only.  Atomics written
without an annotation receive distinct fresh variables, left to right.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Union

from .terms import (
    Renamer,
    Subst,
    Term,
    TermError,
    Var,
    apply,
    parse_term_at,
    _Cursor,
    format_term,
    unify,
)

SORTS = ("s", "np", "n", "sbar", "comma")


class CatError(Exception):
    """Raised for unparseable or ill-formed category text."""


@dataclass(frozen=True)
class Atomic:
    sort: str
    sem: Term

    def __repr__(self) -> str:
        return f"Atomic({self.sort}, {self.sem!r})"


@dataclass(frozen=True)
class Slash:
    dir: str  # "/" or "\\"
    result: "Category"
    arg: "Category"

    def __repr__(self) -> str:
        return f"Slash({self.dir}, {self.result!r}, {self.arg!r})"


Category = Union[Atomic, Slash]


def atomics(cat: Category) -> Iterator[Atomic]:
    """Atomic leaves in left-to-right written order."""
    if isinstance(cat, Atomic):
        yield cat
    else:
        yield from atomics(cat.result)
        yield from atomics(cat.arg)


def map_sems(cat: Category, fn: Callable[[Term], Term]) -> Category:
    if isinstance(cat, Atomic):
        return Atomic(cat.sort, fn(cat.sem))
    return Slash(cat.dir, map_sems(cat.result, fn), map_sems(cat.arg, fn))


def subst_cat(s: Subst, cat: Category) -> Category:
    return map_sems(cat, lambda t: apply(s, t))


def unify_cat(a: Category, b: Category, s: Optional[Subst] = None) -> Optional[Subst]:
    """Shape-strict unification: identical slash skeletons and sorts,
    then term unification of the paired semantics."""
    if s is None:
        s = {}
    if isinstance(a, Atomic) and isinstance(b, Atomic):
        if a.sort != b.sort:
            return None
        return unify(a.sem, b.sem, s)
    if isinstance(a, Slash) and isinstance(b, Slash):
        if a.dir != b.dir:
            return None
        s = unify_cat(a.result, b.result, s)
        if s is None:
            return None
        return unify_cat(a.arg, b.arg, s)
    return None


def cat_vars(cat: Category) -> tuple:
    """Every variable occurring in the category's terms, first-occurrence order
    (lambda parameters included: entries are renamed wholesale)."""
    seen: list = []

    def walk(t: Term) -> None:
        from .terms import Atom, Compound, Lam, Up

        if isinstance(t, Var):
            if t not in seen:
                seen.append(t)
        elif isinstance(t, Atom):
            pass
        elif isinstance(t, Compound):
            for a in t.args:
                walk(a)
        elif isinstance(t, Lam):
            walk(t.param)
            walk(t.body)
        elif isinstance(t, Up):
            walk(t.body)

    for at in atomics(cat):
        walk(at.sem)
    return tuple(seen)


def rename_vars(cat: Category, mapping: dict) -> Category:
    def ren(t: Term) -> Term:
        from .terms import Atom, Compound, Lam, Up

        if isinstance(t, Var):
            return mapping.get(t, t)
        if isinstance(t, Atom):
            return t
        if isinstance(t, Compound):
            return Compound(t.functor, tuple(ren(a) for a in t.args))
        if isinstance(t, Lam):
            return Lam(ren(t.param), ren(t.body))
        if isinstance(t, Up):
            return Up(ren(t.body))
        raise TermError(f"not a term: {t!r}")

    return map_sems(cat, ren)


def standardize_apart(cat: Category, counter) -> Category:
    """Rename every variable to a fresh one drawn from counter (an iterator
    of ints), keeping the original name as a readable stem."""
    mapping = {v: Var(f"{v.id}_{next(counter)}") for v in cat_vars(cat)}
    return rename_vars(cat, mapping)


def result_atomic(cat: Category) -> Atomic:
    while isinstance(cat, Slash):
        cat = cat.result
    return cat


def replace_result_sem(cat: Category, sem: Term) -> Category:
    if isinstance(cat, Atomic):
        return Atomic(cat.sort, sem)
    return Slash(cat.dir, replace_result_sem(cat.result, sem), cat.arg)


def canonical_cat(cat: Category, renamer: Optional[Renamer] = None) -> Category:
    """Alpha-canonical copy; a shared Renamer keeps identities across the
    atomic terms, so two categories are variants iff canonicals are equal."""
    if renamer is None:
        renamer = Renamer()
    return map_sems(cat, lambda t: renamer.rename(t))


# --- textual syntax ---------------------------------------------------------

_BLANK = Var("")  # placeholder for atomics written without a term


def parse_cat(text: str) -> Category:
    cur = _Cursor(text)
    try:
        cat = _cat(cur)
    except TermError as e:
        raise CatError(str(e)) from None
    cur.skip_ws()
    if cur.pos != len(cur.text):
        raise CatError(f"trailing input at position {cur.pos}: {text!r}")
    return _fill_blanks(cat)


def _cat(cur: _Cursor) -> Category:
    left = _part(cur)
    while True:
        cur.skip_ws()
        ch = cur.peek()
        if ch in ("/", "\\"):
            cur.pos += 1
            right = _part(cur)
            left = Slash(ch, left, right)
        else:
            return left


def _part(cur: _Cursor) -> Category:
    cur.skip_ws()
    if cur.peek() == "(":
        cur.pos += 1
        inner = _cat(cur)
        cur.skip_ws()
        if cur.peek() != ")":
            raise CatError(f"expected ')' at position {cur.pos}: {cur.text!r}")
        cur.pos += 1
        cur.skip_ws()
        if cur.peek() == ":":
            raise CatError(
                f"':' may only annotate an atomic category, at position {cur.pos}: {cur.text!r}"
            )
        return inner
    start = cur.pos
    sort = cur.name()
    if sort not in SORTS:
        raise CatError(f"unknown sort {sort!r} at position {start}: {cur.text!r}")
    cur.skip_ws()
    if cur.peek() == ":":
        cur.pos += 1
        sem = parse_term_at(cur)
        return Atomic(sort, sem)
    return Atomic(sort, _BLANK)


def _fill_blanks(cat: Category) -> Category:
    used = {v.id for v in cat_vars(cat) if v.id}
    counter = [0]

    def fresh() -> Var:
        while True:
            counter[0] += 1
            name = f"V{counter[0]}"
            if name not in used:
                return Var(name)

    def fill(c: Category) -> Category:
        if isinstance(c, Atomic):
            if c.sem == _BLANK:
                return Atomic(c.sort, fresh())
            return c
        return Slash(c.dir, fill(c.result), fill(c.arg))

    return fill(cat)


def format_cat(cat: Category, with_sems: bool = True) -> str:
    if isinstance(cat, Atomic):
        if with_sems:
            return f"{cat.sort}:{format_term(cat.sem)}"
        return cat.sort

    def wrap(c: Category) -> str:
        inner = format_cat(c, with_sems)
        return f"({inner})" if isinstance(c, Slash) else inner

    return f"{wrap(cat.result)}{cat.dir}{wrap(cat.arg)}"


def cat_key(cat: Category) -> str:
    """Canonical printed form, usable as a variant-equivalence key."""
    return format_cat(canonical_cat(cat))
