"""Canonical scoped readings of a parsed sentence.

Full-span logical forms arrive with some determiners still in
set-denoting argument position (s-<det> terms).  `normalize` promotes
each to a scoping quantifier q-<det>(V, restriction, body) wrapped at
the smallest subterm that covers its occurrences, so that derivations
differing only in where along the spine an argument was consumed map to
one canonical reading.  Placement rules:

- An occurrence whose restriction mentions a variable bound above it is
  promoted just above its own predication when nothing quantificational
  intervenes below the binder (or when the intervening material is a
  coordination); otherwise directly below the binder.
- Structurally identical occurrences distributed over a coordination
  are promoted jointly at their smallest common compound when no
  quantifier or up(.) boundary separates it from them, unless every
  occurrence sits beside an intensional argument under an outer
  quantifier, in which case each occurrence is handled on its own.
- An occurrence beside an up(.) argument that still carries scope
  material stays in place (a set-form residue): promoting it would
  assert an order against material trapped in the intensional argument.
- Everything else is promoted at its own predication; promotion never
  crosses an up(.) boundary outward.

At one predication, promoted quantifiers nest leftmost-argument
outermost, except when a bound variable sits between two promoted
argument positions (then the order flips, keeping the binder adjacent
to the position it licenses).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

from .categories import Atomic
from .chart import Chart, count_derivations, parse
from .lexicon import Lexicon, default_lexicon
from .terms import (
    QUANT_PREFIX,
    SET_PREFIX,
    Atom,
    Compound,
    Lam,
    Term,
    Up,
    Var,
    apply,
    canonicalize,
    format_term,
    free_vars,
    is_quant,
    is_set_form,
)


class NoParseError(Exception):
    """The sentence has no full-span s derivation."""


class StructuralError(Exception):
    """A logical form is not in promotable shape."""


class ReadingError(Exception):
    """A named determiner occurrence is absent from a reading."""


@dataclass(frozen=True)
class Reading:
    term: Term
    multiplicity: int


# --- term walking ----------------------------------------------------------

def _walk(t: Term) -> Iterator[Tuple[tuple, Term]]:
    """All (path, node) pairs in preorder."""

    def go(node, path):
        yield path, node
        if isinstance(node, Compound):
            for i, a in enumerate(node.args):
                yield from go(a, path + (i,))
        elif isinstance(node, Lam):
            yield from go(node.body, path + ("lam",))
        elif isinstance(node, Up):
            yield from go(node.body, path + ("up",))

    yield from go(t, ())


def _node_at(t: Term, path: tuple) -> Term:
    for step in path:
        if isinstance(t, Compound):
            t = t.args[step]
        elif isinstance(t, Lam):
            t = t.body
        else:
            t = t.body
    return t


def _chain(t: Term, path: tuple) -> List[Tuple[Term, object]]:
    """(ancestor node, step taken) pairs from the root down to path."""
    out = []
    node = t
    for step in path:
        out.append((node, step))
        node = _node_at(node, (step,))
    return out


def _is_and(node: Term) -> bool:
    return isinstance(node, Compound) and node.functor == "and" and len(node.args) == 2


def _binds(node: Term, step) -> Optional[Var]:
    """The variable node makes visible along this step, if any."""
    if is_quant(node) and isinstance(node.args[0], Var) and step in (1, 2):
        return node.args[0]
    return None


def _has_scope_material(t: Term) -> bool:
    return any(is_quant(n) or is_set_form(n) for _, n in _walk(t))


# --- promotion site assignment ---------------------------------------------

@dataclass
class _Wrap:
    site: tuple
    det: str
    var: Var
    arg_path: tuple       # path of the argument subtree used as restriction
    occ_paths: Tuple[tuple, ...]
    order: int            # preorder rank of the first occurrence


def _low_site(chain: List[Tuple[Term, object]], path: tuple) -> tuple:
    """Innermost enclosing compound; promotion never exits an up(.)."""
    for idx in range(len(chain) - 1, -1, -1):
        node = chain[idx][0]
        if isinstance(node, Compound):
            return path[:idx]
        if isinstance(node, Up):
            raise StructuralError("set form directly under an up(.) argument")
    raise StructuralError("set form with no enclosing compound")


def _float_position(chain: List[Tuple[Term, object]]) -> bool:
    if not chain:
        return False
    node, step = chain[-1]
    if not isinstance(node, Compound):
        return False
    return any(isinstance(a, Up) and _has_scope_material(a.body)
               for i, a in enumerate(node.args) if i != step)


def _single_site(t, chain, path) -> Optional[tuple]:
    """Site for one closed occurrence; None means it stays in place."""
    if any(isinstance(n, Up) for n, _ in chain):
        return _low_site(chain, path)
    if _float_position(chain):
        return None
    return _low_site(chain, path)


def _dependent_site(t, chain, path, free: set) -> tuple:
    binder_idx = None
    for idx in range(len(chain) - 1, -1, -1):
        if _binds(*chain[idx]) in free:
            binder_idx = idx
            break
    assert binder_idx is not None
    below = chain[binder_idx + 1:]
    if not any(is_quant(n) for n, _ in below) or any(_is_and(n) for n, _ in below):
        return _low_site(chain, path)
    return path[:binder_idx + 1]


def _assign_sites(t: Term) -> Tuple[List[_Wrap], Dict[tuple, Var]]:
    occ_list = [(path, node) for path, node in _walk(t) if is_set_form(node)]
    rank = {path: i for i, (path, _) in enumerate(occ_list)}
    groups: Dict[Term, List[tuple]] = {}
    for path, node in occ_list:
        groups.setdefault(node, []).append(path)

    fresh = itertools.count(1)
    wraps: List[_Wrap] = []
    replace: Dict[tuple, Var] = {}

    def promote(det, paths, site):
        var = Var(f"_q{next(fresh)}")
        for p in paths:
            replace[p] = var
        wraps.append(_Wrap(site, det, var, paths[0] + (0,), tuple(paths),
                           min(rank[p] for p in paths)))

    # Joint promotion keeps only the first copy's subtree; occurrences of
    # other tokens inside a discarded copy have identical twins inside the
    # surviving copy, so they are dropped here.  Containers are decided
    # before the tokens their copies contain (their occurrence paths are
    # strictly shorter).
    dead: List[tuple] = []

    def alive(p: tuple) -> bool:
        return not any(len(p) > len(d) and p[:len(d)] == d for d in dead)

    ordered_groups = sorted(
        groups.items(),
        key=lambda kv: (min(len(p) for p in kv[1]), min(rank[p] for p in kv[1])))

    for node, paths in ordered_groups:
        paths = [p for p in paths if alive(p)]
        if not paths:
            continue
        det = node.functor[len(SET_PREFIX):]
        chains = {p: _chain(t, p) for p in paths}
        bound_free = {}
        for p in paths:
            fv = set(free_vars(node.args[0]))
            visible = {v for n, s in chains[p] if (v := _binds(n, s)) is not None}
            bound_free[p] = fv & visible

        if any(bound_free[p] for p in paths):
            for p in paths:
                if bound_free[p]:
                    site = _dependent_site(t, chains[p], p, bound_free[p])
                else:
                    site = _single_site(t, chains[p], p)
                if site is not None:
                    promote(det, [p], site)
            continue

        if len(paths) >= 2:
            prefix = paths[0]
            for p in paths[1:]:
                n = 0
                while n < min(len(prefix), len(p)) and prefix[n] == p[n]:
                    n += 1
                prefix = prefix[:n]
            while prefix and not isinstance(_node_at(t, prefix), Compound):
                prefix = prefix[:-1]
            sca_chain = _chain(t, prefix)
            dominated = any(is_quant(n) for n, _ in sca_chain)
            if dominated and all(_float_position(chains[p]) for p in paths):
                pass  # every copy floats beside an up(.): handle one by one
            else:
                blocked = False
                for p in paths:
                    between = chains[p][len(prefix) + 1:]
                    if any(is_quant(n) or isinstance(n, Up) for n, _ in between):
                        blocked = True
                        break
                if not blocked:
                    promote(det, paths, prefix)
                    dead.extend(paths[1:])
                    continue

        for p in paths:
            site = _single_site(t, chains[p], p)
            if site is not None:
                promote(det, [p], site)

    return wraps, replace


# --- phase 2: rebuild -------------------------------------------------------

def _ordered(wraps: List[_Wrap], node: Term, path: tuple, t: Term) -> List[_Wrap]:
    """Outermost-first order of the quantifiers wrapped at one site."""
    direct = {}
    for w in wraps:
        pos = [p[-1] for p in w.occ_paths
               if len(p) == len(path) + 1 and isinstance(p[-1], int)]
        if pos:
            direct[id(w)] = min(pos)
    flip = False
    if len(direct) >= 2 and isinstance(node, Compound):
        visible = {v for n, s in _chain(t, path) if (v := _binds(n, s)) is not None}
        for a, b in itertools.combinations(sorted(direct.values()), 2):
            if any(isinstance(node.args[k], Var) and node.args[k] in visible
                   for k in range(a + 1, b)):
                flip = True
    return sorted(wraps, key=lambda w: w.order, reverse=flip)


def normalize(t: Term) -> Term:
    """Promote set forms to scoped quantifiers; alpha-canonical result."""
    for _, node in _walk(t):
        if is_quant(node) and not isinstance(node.args[0], Var):
            raise StructuralError(
                "quantifier with a non-variable in its variable position")

    wraps, replace = _assign_sites(t)
    by_site: Dict[tuple, List[_Wrap]] = {}
    for w in wraps:
        by_site.setdefault(w.site, []).append(w)

    def restriction(w: _Wrap) -> Term:
        body = rebuild(_node_at(t, w.arg_path), w.arg_path)
        if isinstance(body, Lam):
            return apply({body.param: w.var}, body.body)
        if isinstance(body, Atom):
            return Compound(body.name, (w.var,))
        raise StructuralError(f"unpromotable restriction {format_term(body)}")

    def rebuild(node: Term, path: tuple) -> Term:
        if path in replace:
            return replace[path]
        if isinstance(node, Compound):
            out: Term = Compound(node.functor,
                                 tuple(rebuild(a, path + (i,))
                                       for i, a in enumerate(node.args)))
        elif isinstance(node, Lam):
            out = Lam(node.param, rebuild(node.body, path + ("lam",)))
        elif isinstance(node, Up):
            out = Up(rebuild(node.body, path + ("up",)))
        else:
            out = node
        here = by_site.get(path)
        if here:
            for w in reversed(_ordered(here, node, path, t)):
                out = Compound(QUANT_PREFIX + w.det, (w.var, restriction(w), out))
        return out

    result = rebuild(t, ())
    if free_vars(t) == () and free_vars(result):
        raise StructuralError(
            f"promotion left variables unbound in {format_term(result)}")
    return canonicalize(result)


# --- filters ----------------------------------------------------------------

def _well_formed(t: Term) -> bool:
    return all(isinstance(n.args[0], Var)
               for _, n in _walk(t) if is_quant(n))


def _intensional_violation(t: Term) -> bool:
    """A quantifier binding into an up(.) argument it cannot scope over.

    Binding into an intensional argument is tolerated only when the
    binder sits immediately on a coordination of such arguments and no
    other quantifier intervenes above the up(.).
    """
    for path, node in _walk(t):
        if not isinstance(node, Up):
            continue
        free = set(free_vars(node.body))
        if not free:
            continue
        chain = _chain(t, path)
        binder_idx = None
        for idx in range(len(chain) - 1, -1, -1):
            if _binds(*chain[idx]) in free:
                binder_idx = idx
                break
        if binder_idx is None:
            continue
        others = any(is_quant(n) and idx != binder_idx
                     for idx, (n, _) in enumerate(chain))
        coordinated = any(_is_and(n) for n, _ in chain[binder_idx + 1:])
        if others or not coordinated:
            return True
    return False


# --- readings ---------------------------------------------------------------

def readings_from_chart(chart: Chart) -> List[Reading]:
    full = [it for it in chart.full_span()
            if isinstance(it.cat, Atomic) and it.cat.sort == "s"]
    if not full:
        raise NoParseError("no full-span s derivation")
    counts = count_derivations(chart)
    groups: Dict[Term, int] = {}
    for item in full:
        lf = item.cat.sem
        if not _well_formed(lf) or _intensional_violation(lf):
            continue
        canon = normalize(lf)
        groups[canon] = groups.get(canon, 0) + counts[item.id]
    out = [Reading(term, mult) for term, mult in groups.items()]
    out.sort(key=lambda r: format_term(r.term))
    return out


def readings(tokens, lexicon: Optional[Lexicon] = None) -> List[Reading]:
    return readings_from_chart(parse(tokens, lexicon or default_lexicon()))


# --- determiner occurrences and scope order ----------------------------------

@dataclass(frozen=True)
class Occurrence:
    label: str
    det: str
    noun: str
    path: tuple
    kind: str  # "q" promoted | "s" residual set form


def _head_noun(restr: Term, var: Var) -> str:
    for _, n in _walk(restr):
        if (isinstance(n, Compound) and not is_quant(n) and not is_set_form(n)
                and n.args and n.args[0] == var):
            return n.functor
    return "?"


def occurrences(t: Term) -> List[Occurrence]:
    found = []
    for path, node in _walk(t):
        if is_quant(node) and isinstance(node.args[0], Var):
            det = node.functor[len(QUANT_PREFIX):]
            found.append((det, _head_noun(node.args[1], node.args[0]), path, "q"))
        elif is_set_form(node):
            det = node.functor[len(SET_PREFIX):]
            arg = node.args[0]
            if isinstance(arg, Atom):
                noun = arg.name
            elif isinstance(arg, Lam):
                noun = _head_noun(arg.body, arg.param)
            else:
                noun = "?"
            found.append((det, noun, path, "s"))
    counts: Dict[str, int] = {}
    for det, _, _, _ in found:
        counts[det] = counts.get(det, 0) + 1
    out = []
    for det, noun, path, kind in found:
        label = det if counts[det] == 1 else f"{det}-{noun}"
        out.append(Occurrence(label, det, noun, path, kind))
    return out


def _resolve(occs: List[Occurrence], name: str) -> List[Occurrence]:
    hits = [o for o in occs
            if name in (o.label, o.det, f"{o.det}-{o.noun}")]
    if not hits:
        raise ReadingError(f"no determiner occurrence named {name!r}")
    return hits


def outscopes(reading, d1: str, d2: str) -> bool:
    """Does some d1 quantifier contain a d2 occurrence in its scope?"""
    t = reading.term if isinstance(reading, Reading) else reading
    occs = occurrences(t)
    for o1 in _resolve(occs, d1):
        if o1.kind != "q":
            continue
        for o2 in _resolve(occs, d2):
            if o2.path == o1.path:
                continue
            k = len(o1.path)
            if len(o2.path) > k and o2.path[:k] == o1.path and o2.path[k] in (1, 2):
                return True
    return False


def scope_profile(t: Term) -> frozenset:
    """All (outer label, inner label) pairs ordered by containment."""
    occs = occurrences(t)
    prof = set()
    for o1 in occs:
        if o1.kind != "q":
            continue
        k = len(o1.path)
        for o2 in occs:
            if o2.path != o1.path and len(o2.path) > k \
                    and o2.path[:k] == o1.path and o2.path[k] in (1, 2):
                prof.add((o1.label, o2.label))
    return frozenset(prof)
