"""Definitions of predicates by pattern clauses, with stratification checks.

A clause `forall xs, nabla zs, p ts := B` is stored with its nabla-bound
head positions as reserved nominal constants; they are abstracted away
again whenever the clause is used, so they never leak into sequents.
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import formulas as F
from .terms import (Base, Const, Nom, Term, Ty, Var, abstract_noms, app,
                    arrow, normalize, support, ty_args)


class DefError(Exception):
    pass


class StratError(DefError):
    pass


_clause_nom_counter = itertools.count(1)


def clause_nom(ty):
    """Reserved nominal used for a nabla-bound head position of a clause."""
    return Nom("'z%d" % next(_clause_nom_counter), ty)


def is_clause_nom(n):
    return isinstance(n, Nom) and n.name.startswith("'z")


@dataclass
class Clause:
    pred: str
    univ: Dict[str, Ty]          # universally quantified clause variables
    nabla: List[Nom]             # nabla-bound head positions, outermost first
    head_args: Tuple[Term, ...]
    body: F.Formula


@dataclass
class Definition:
    pred: str
    ty: Ty
    flavor: str                  # 'plain' | 'inductive' | 'coinductive'
    clauses: List[Clause] = field(default_factory=list)
    level: int = 0


def head_tuple_const(pred, ty):
    """Internal constructor used to pack a clause head into one term."""
    atys, _ = ty_args(ty)
    return Const("'head_" + pred, arrow(atys, Base("'hd")))


class DefTable:
    def __init__(self):
        self.defs: Dict[str, Definition] = {}

    def clone(self):
        t = DefTable()
        t.defs = dict(self.defs)
        return t

    def get(self, pred):
        return self.defs.get(pred)

    def flavor(self, pred):
        d = self.defs.get(pred)
        return d.flavor if d else None

    def add_block(self, block, unstratified=False):
        """Add one Define/CoDefine block: a list of Definition objects whose
        clauses are already built.  Checks shapes and stratification."""
        for d in block:
            if d.pred in self.defs:
                raise DefError("predicate %s is already defined" % d.pred)
        for d in block:
            for c in d.clauses:
                self._check_clause(d, c, block)
            if d.flavor == "coinductive":
                self._check_coclauses(d)
        levels = infer_levels(block, self.defs, unstratified)
        for d in block:
            d.level = levels[d.pred]
            self.defs[d.pred] = d

    def _check_clause(self, d, c, block):
        if c.pred != d.pred:
            raise DefError("clause head %s does not match %s" % (c.pred, d.pred))
        atys, res = ty_args(d.ty)
        if len(c.head_args) != len(atys):
            raise DefError("clause for %s has %d head arguments, expected %d"
                           % (d.pred, len(c.head_args), len(atys)))
        for a in c.head_args:
            for n in support(a):
                if not is_clause_nom(n) or n not in c.nabla:
                    raise DefError(
                        "nominal constants may not appear in clause heads")
        if F.formula_support(c.body):
            raise DefError("nominal constants may not appear in clause bodies")
        # the nabla-bound head positions may not occur in the body: already
        # implied by the support check above since they are nominals
        for v in F.formula_vars(c.body):
            if v.name not in c.univ:
                raise DefError("unbound variable %s in clause body" % v.name)

    def _check_coclauses(self, d):
        if len(d.clauses) != 1:
            raise DefError(
                "a coinductive definition must have exactly one clause")
        c = d.clauses[0]
        if c.nabla:
            raise DefError(
                "a coinductive definition may not bind nabla in its head")
        seen = set()
        for a in c.head_args:
            a = normalize(a)
            if not isinstance(a, Var) or a.name in seen:
                raise DefError("coinductive clause heads must have distinct "
                               "variable arguments")
            seen.add(a.name)


# ---------------------------------------------------------------------------
# stratification

def _occurrences(f, w=0):
    """(pred, implication weight) pairs for every atom occurrence in f."""
    if isinstance(f, F.Atom):
        return [(f.pred, w)]
    if isinstance(f, F.SpecAtom):
        return [("seq", w)]
    if isinstance(f, F.Imp):
        return _occurrences(f.left, w + 1) + _occurrences(f.right, w)
    if isinstance(f, (F.And, F.Or)):
        return _occurrences(f.left, w) + _occurrences(f.right, w)
    if isinstance(f, F.Quant):
        return _occurrences(f.body, w)
    return []


def lvl(f, levels):
    """Level of a formula given predicate levels."""
    if isinstance(f, (F.Top, F.Bot, F.NAbs)):
        return 0
    if isinstance(f, F.Atom):
        return levels.get(f.pred, 0)
    if isinstance(f, F.SpecAtom):
        return levels.get("seq", 0)
    if isinstance(f, (F.And, F.Or)):
        return max(lvl(f.left, levels), lvl(f.right, levels))
    if isinstance(f, F.Imp):
        return max(lvl(f.left, levels) + 1, lvl(f.right, levels))
    if isinstance(f, F.Quant):
        return lvl(f.body, levels)
    raise DefError("no level for %r" % (f,))


def _replace_pred_with_top(f, pred):
    if isinstance(f, F.Atom) and f.pred == pred:
        return F.Top()
    if isinstance(f, F.And):
        return F.And(_replace_pred_with_top(f.left, pred),
                     _replace_pred_with_top(f.right, pred))
    if isinstance(f, F.Or):
        return F.Or(_replace_pred_with_top(f.left, pred),
                    _replace_pred_with_top(f.right, pred))
    if isinstance(f, F.Imp):
        return F.Imp(_replace_pred_with_top(f.left, pred),
                     _replace_pred_with_top(f.right, pred))
    if isinstance(f, F.Quant):
        return F.Quant(f.kind, f.hint, f.ty, _replace_pred_with_top(f.body, pred))
    return f


def infer_levels(block, existing, unstratified=False):
    """Assign a level to each predicate of a new block, or raise StratError.

    A body occurrence of the predicate itself under an implication is a
    negative self-dependency; distinct block predicates depending on each
    other cannot be stratified and get a merge hint."""
    block_preds = {d.pred for d in block}
    base = {p: d.level for p, d in existing.items()}

    deps = {p: [] for p in block_preds}   # p -> [(q, weight)] with q != p
    for d in block:
        for c in d.clauses:
            for q, w in _occurrences(c.body):
                if q == d.pred:
                    if w > 0 and not unstratified:
                        raise StratError(
                            "%s occurs to the left of an implication in its "
                            "own definition" % d.pred)
                elif q in block_preds:
                    deps[d.pred].append((q, w))
                elif q in base or q == "seq":
                    deps[d.pred].append((q, w))
                else:
                    raise DefError("undefined predicate %s in a clause body" % q)

    if not unstratified:
        # a dependency cycle among distinct block predicates is unstratifiable
        def reach(p, target, seen):
            for q, _ in deps.get(p, []):
                if q in block_preds:
                    if q == target:
                        return True
                    if q not in seen:
                        seen.add(q)
                        if reach(q, target, seen):
                            return True
            return False
        for p in block_preds:
            if reach(p, p, set()):
                raise StratError(
                    "mutual recursion between block predicates cannot be "
                    "stratified; merge them into a single predicate")

    levels = dict(base)
    levels.setdefault("seq", 0)
    pending = set(block_preds)
    for p in block_preds:
        levels[p] = 0
    changed = True
    rounds = 0
    while changed:
        changed = False
        rounds += 1
        if rounds > len(block_preds) + 2:
            break
        for p in pending:
            # the body with p replaced by top must sit strictly below p,
            # so a defined predicate always has level at least 1
            want = 1
            for q, w in deps[p]:
                want = max(want, levels.get(q, 0) + w + 1)
            if want > levels[p]:
                levels[p] = want
                changed = True

    if not unstratified:
        for d in block:
            for c in d.clauses:
                if lvl(c.body, levels) > levels[d.pred]:
                    raise StratError("definition of %s is not stratified"
                                     % d.pred)
                if lvl(_replace_pred_with_top(c.body, d.pred), levels) \
                        >= levels[d.pred]:
                    raise StratError("definition of %s is not stratified"
                                     % d.pred)
    return {d.pred: levels[d.pred] for d in block}


# ---------------------------------------------------------------------------
# translation of pattern clauses into one fixed point body

def translate_pattern_def(defn):
    """Return (arg_vars, body): the single-clause form

       p ys := \\/_i exists xs_i, (lam zs_i, <ts_i>) |> <ys> /\\ B_i

    used by the explicit fixed point rules.  <.> packs a head into one term
    with an internal constructor."""
    atys, _ = ty_args(defn.ty)
    ys = [Var("'y%d" % (i + 1), ty) for i, ty in enumerate(atys)]
    tup = head_tuple_const(defn.pred, defn.ty)
    rhs = app(tup, ys)
    disjuncts = []
    for c in defn.clauses:
        lhs = abstract_noms(app(tup, list(c.head_args)), c.nabla)
        na = F.NAbs(normalize(lhs), normalize(rhs), len(c.nabla))
        d = F.And(na, c.body) if not isinstance(c.body, F.Top) else na
        # quantify the clause variables existentially
        for name in reversed(list(c.univ)):
            d = _close_var(d, name, c.univ[name], "exists")
        disjuncts.append(d)
    body = disjuncts[0]
    for d in disjuncts[1:]:
        body = F.Or(body, d)
    return ys, body


def _close_var(f, name, ty, kind):
    """Bind the free variable `name` with a formula quantifier."""
    def repl(t, d):
        return normalize(_subst_var_bound(t, name, d))
    return F.Quant(kind, name, ty, F.map_terms(f, repl))


def _subst_var_bound(t, name, depth):
    from .terms import App, Bound, Lam
    if isinstance(t, Var) and t.name == name:
        return Bound(depth)
    if isinstance(t, App):
        return App(_subst_var_bound(t.fn, name, depth),
                   _subst_var_bound(t.arg, name, depth))
    if isinstance(t, Lam):
        return Lam(t.argty, _subst_var_bound(t.body, name, depth + 1))
    return t
