"""First-order logical terms with quantifier conventions.

Terms are immutable trees: variables, atoms, compounds, single-parameter
lambdas (written ``X^body``), and the clause-reifying wrapper ``up(body)``.
Substitutions are plain dicts from Var to Term and are kept idempotent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union


class TermError(Exception):
    """Raised for malformed terms or unparseable term text."""


@dataclass(frozen=True)
class Var:
    id: str

    def __repr__(self) -> str:
        return f"Var({self.id})"


@dataclass(frozen=True)
class Atom:
    name: str

    def __repr__(self) -> str:
        return f"Atom({self.name})"


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple

    def __repr__(self) -> str:
        return f"Compound({self.functor}, {list(self.args)})"


@dataclass(frozen=True)
class Lam:
    # The parameter is a binding occurrence; renaming is handled by
    # canonicalize, while unify/apply treat it like an ordinary argument
    # slot (entries are standardized apart, so capture cannot arise).
    param: Var
    body: "Term"

    def __repr__(self) -> str:
        return f"Lam({self.param.id}, {self.body!r})"


@dataclass(frozen=True)
class Up:
    body: "Term"

    def __repr__(self) -> str:
        return f"Up({self.body!r})"


Term = Union[Var, Atom, Compound, Lam, Up]

Subst = dict

QUANT_PREFIX = "q-"
SET_PREFIX = "s-"


def is_quant(t: Term) -> bool:
    """True for generalized-quantifier nodes q-<det>(V, restriction, body)."""
    return isinstance(t, Compound) and t.functor.startswith(QUANT_PREFIX) and len(t.args) == 3


def is_set_form(t: Term) -> bool:
    """True for set-denoting quantifier terms s-<det>(property)."""
    return isinstance(t, Compound) and t.functor.startswith(SET_PREFIX) and len(t.args) == 1


def apply(s: Subst, t: Term, _active: frozenset = frozenset()) -> Term:
    """Apply substitution s to t, chasing bindings to a fixpoint.

    Unifiers produced here are idempotent, but apply also accepts any
    acyclic dict (a cyclic one raises TermError rather than looping).
    """
    if isinstance(t, Var):
        if t in s:
            if t in _active:
                raise TermError(f"cyclic substitution through {t.id}")
            return apply(s, s[t], _active | {t})
        return t
    if isinstance(t, Atom):
        return t
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(apply(s, a, _active) for a in t.args))
    if isinstance(t, Lam):
        param = apply(s, t.param, _active)
        if not isinstance(param, Var):
            raise TermError(f"substitution maps lambda parameter {t.param.id} to non-variable")
        return Lam(param, apply(s, t.body, _active))
    if isinstance(t, Up):
        return Up(apply(s, t.body, _active))
    raise TermError(f"not a term: {t!r}")


def occurs(v: Var, t: Term) -> bool:
    if isinstance(t, Var):
        return t == v
    if isinstance(t, Atom):
        return False
    if isinstance(t, Compound):
        return any(occurs(v, a) for a in t.args)
    if isinstance(t, Lam):
        return t.param == v or occurs(v, t.body)
    if isinstance(t, Up):
        return occurs(v, t.body)
    raise TermError(f"not a term: {t!r}")


def _bind(s: Subst, v: Var, t: Term) -> Optional[Subst]:
    if isinstance(t, Var) and t == v:
        return s
    if occurs(v, t):
        return None
    one = {v: t}
    out = {w: apply(one, u) for w, u in s.items()}
    out[v] = t
    return out


def unify(a: Term, b: Term, s: Optional[Subst] = None) -> Optional[Subst]:
    """Most general unifier extending s, or None.  Occurs check is on.

    Variable-variable ties bind the variable with the smaller id.
    """
    if s is None:
        s = {}
    a = apply(s, a)
    b = apply(s, b)
    if isinstance(a, Var) and isinstance(b, Var):
        if a == b:
            return s
        lo, hi = (a, b) if a.id < b.id else (b, a)
        return _bind(s, lo, hi)
    if isinstance(a, Var):
        return _bind(s, a, b)
    if isinstance(b, Var):
        return _bind(s, b, a)
    if isinstance(a, Atom) and isinstance(b, Atom):
        return s if a.name == b.name else None
    if isinstance(a, Compound) and isinstance(b, Compound):
        if a.functor != b.functor or len(a.args) != len(b.args):
            return None
        for x, y in zip(a.args, b.args):
            s = unify(x, y, s)
            if s is None:
                return None
        return s
    if isinstance(a, Lam) and isinstance(b, Lam):
        s = unify(a.param, b.param, s)
        if s is None:
            return None
        return unify(a.body, b.body, s)
    if isinstance(a, Up) and isinstance(b, Up):
        return unify(a.body, b.body, s)
    return None


class Renamer:
    """Stateful canonical renamer shared across several terms.

    Free variables get consistent fresh names in first-occurrence order;
    lambda parameters are renamed at their binding site with shadowing.
    """

    def __init__(self, prefix: str = "v"):
        self.prefix = prefix
        self.count = 0
        self.free: dict = {}

    def _next(self) -> str:
        self.count += 1
        return f"{self.prefix}{self.count}"

    def rename(self, t: Term, env: Optional[dict] = None) -> Term:
        if env is None:
            env = {}
        if isinstance(t, Var):
            if t.id in env:
                return Var(env[t.id])
            if t.id not in self.free:
                self.free[t.id] = self._next()
            return Var(self.free[t.id])
        if isinstance(t, Atom):
            return t
        if isinstance(t, Compound):
            return Compound(t.functor, tuple(self.rename(a, env) for a in t.args))
        if isinstance(t, Lam):
            name = self._next()
            inner = dict(env)
            inner[t.param.id] = name
            return Lam(Var(name), self.rename(t.body, inner))
        if isinstance(t, Up):
            return Up(self.rename(t.body, env))
        raise TermError(f"not a term: {t!r}")


def canonicalize(t: Term) -> Term:
    """Alpha-canonical form: two terms are variants iff canonical forms are equal."""
    return Renamer().rename(t)


def free_vars(t: Term) -> tuple:
    """Free variables in first-occurrence order.

    Lam binds its parameter; a q-<det>(V, R, B) node binds V within R and B.
    Set-forms s-<det>(p) bind nothing.
    """
    seen: list = []

    def walk(t: Term, bound: frozenset) -> None:
        if isinstance(t, Var):
            if t not in bound and t not in seen:
                seen.append(t)
        elif isinstance(t, Atom):
            pass
        elif isinstance(t, Compound):
            if is_quant(t) and isinstance(t.args[0], Var):
                inner = bound | {t.args[0]}
                walk(t.args[1], inner)
                walk(t.args[2], inner)
            else:
                for a in t.args:
                    walk(a, bound)
        elif isinstance(t, Lam):
            walk(t.body, bound | {t.param})
        elif isinstance(t, Up):
            walk(t.body, bound)
        else:
            raise TermError(f"not a term: {t!r}")

    walk(t, frozenset())
    return tuple(seen)


def eta_reduce_sets(t: Term) -> Term:
    """Rewrite s-<det>(X^p(X)) to s-<det>(p) everywhere.

    The two forms are interchangeable; the reduced one is canonical so that
    packed chart cells and printed categories agree with the short spelling.
    """
    if isinstance(t, (Var, Atom)):
        return t
    if isinstance(t, Compound):
        args = tuple(eta_reduce_sets(a) for a in t.args)
        if (
            t.functor.startswith(SET_PREFIX)
            and len(args) == 1
            and isinstance(args[0], Lam)
            and isinstance(args[0].body, Compound)
            and len(args[0].body.args) == 1
            and args[0].body.args[0] == args[0].param
        ):
            return Compound(t.functor, (Atom(args[0].body.functor),))
        return Compound(t.functor, args)
    if isinstance(t, Lam):
        return Lam(t.param, eta_reduce_sets(t.body))
    if isinstance(t, Up):
        return Up(eta_reduce_sets(t.body))
    raise TermError(f"not a term: {t!r}")


# --- textual syntax ---------------------------------------------------------

_NAME_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-?")


def _is_var_name(name: str) -> bool:
    # Canonical names v1, v2, ... count as variables so printed canonical
    # forms parse back to themselves.
    if name[0].isupper():
        return True
    if name[0] == "v" and len(name) > 1 and name[1:].isdigit():
        return True
    return False


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str) -> TermError:
        return TermError(f"{msg} at position {self.pos}: {self.text!r}")

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str) -> None:
        self.skip_ws()
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def name(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in _NAME_CHARS:
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a name")
        return self.text[start:self.pos]


def parse_term_at(cur: _Cursor) -> Term:
    t = _primary(cur)
    cur.skip_ws()
    if cur.peek() == "^":
        if not isinstance(t, Var):
            raise cur.error("lambda parameter must be a variable")
        cur.eat("^")
        return Lam(t, parse_term_at(cur))
    return t


def _primary(cur: _Cursor) -> Term:
    cur.skip_ws()
    if cur.peek() == "(":
        cur.eat("(")
        t = parse_term_at(cur)
        cur.eat(")")
        return t
    name = cur.name()
    cur.skip_ws()
    if cur.peek() == "(":
        cur.eat("(")
        args = [parse_term_at(cur)]
        cur.skip_ws()
        while cur.peek() == ",":
            cur.eat(",")
            args.append(parse_term_at(cur))
            cur.skip_ws()
        cur.eat(")")
        if name == "up":
            if len(args) != 1:
                raise cur.error("up takes exactly one argument")
            return Up(args[0])
        return Compound(name, tuple(args))
    if _is_var_name(name):
        return Var(name)
    return Atom(name)


def parse_term(text: str) -> Term:
    cur = _Cursor(text)
    t = parse_term_at(cur)
    cur.skip_ws()
    if cur.pos != len(cur.text):
        raise cur.error("trailing input")
    return t


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.id
    if isinstance(t, Atom):
        return t.name
    if isinstance(t, Compound):
        return f"{t.functor}({', '.join(format_term(a) for a in t.args)})"
    if isinstance(t, Lam):
        return f"{t.param.id}^{format_term(t.body)}"
    if isinstance(t, Up):
        return f"up({format_term(t.body)})"
    raise TermError(f"not a term: {t!r}")
