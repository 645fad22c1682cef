"""Formulas of the reasoning logic.

Quantifier bodies share the de Bruijn index space with the terms inside
atoms: a formula binder behaves like one more lambda wrapped around every
term occurring below it.
"""

from dataclasses import dataclass, replace
from typing import Optional, Tuple

from . import terms
from .terms import Term, Ty, normalize, subst_bound, permute, support


@dataclass(frozen=True)
class Annotation:
    kind: str   # one of '*', '@', '+', '#'
    level: int  # nesting depth, 1 for the outermost (co)induction

    def __str__(self):
        return self.kind * self.level


INDUCTIVE_ANNS = ("*", "@")
COINDUCTIVE_ANNS = ("+", "#")


class Formula:
    pass


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Quant(Formula):
    kind: str  # 'forall' | 'exists' | 'nabla'
    hint: str  # preferred display name of the bound variable
    ty: Ty
    body: Formula


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    args: Tuple[Term, ...]
    ann: Optional[Annotation] = None


@dataclass(frozen=True)
class NAbs(Formula):
    """lhs abstracts rhs over `degree` nominals; degree 0 is plain equality."""
    lhs: Term
    rhs: Term
    degree: int = 0


@dataclass(frozen=True)
class SpecAtom(Formula):
    """A specification-logic sequent ctx |- goal, seen as one meta formula."""
    ctx: Term
    goal: Term
    ann: Optional[Annotation] = None


def conj(fs):
    if not fs:
        return Top()
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def conjuncts(f):
    if isinstance(f, And):
        return conjuncts(f.left) + conjuncts(f.right)
    return [f]


def imp(premises, concl):
    for p in reversed(premises):
        concl = Imp(p, concl)
    return concl


# ---------------------------------------------------------------------------
# structural traversal

def map_terms(f, fn):
    """Rebuild f applying fn(term, depth) to every term, where depth counts
    the formula binders crossed above the term."""
    def go(f, d):
        if isinstance(f, (Top, Bot)):
            return f
        if isinstance(f, And):
            return And(go(f.left, d), go(f.right, d))
        if isinstance(f, Or):
            return Or(go(f.left, d), go(f.right, d))
        if isinstance(f, Imp):
            return Imp(go(f.left, d), go(f.right, d))
        if isinstance(f, Quant):
            return Quant(f.kind, f.hint, f.ty, go(f.body, d + 1))
        if isinstance(f, Atom):
            return Atom(f.pred, tuple(fn(a, d) for a in f.args), f.ann)
        if isinstance(f, NAbs):
            return NAbs(fn(f.lhs, d), fn(f.rhs, d), f.degree)
        if isinstance(f, SpecAtom):
            return SpecAtom(fn(f.ctx, d), fn(f.goal, d), f.ann)
        raise TypeError("not a formula: %r" % (f,))
    return go(f, 0)


def iter_terms(f):
    """Yield (term, depth) for every term in f."""
    out = []
    def keep(t, d):
        out.append((t, d))
        return t
    map_terms(f, keep)
    return out


def normalize_formula(f):
    return map_terms(f, lambda t, d: normalize(t))


def inst(body, t):
    """Open a quantifier body with the closed term t."""
    return map_terms(body, lambda s, d: normalize(subst_bound(s, t, d)))


def open_quant(f, t):
    assert isinstance(f, Quant)
    return inst(f.body, t)


def formula_support(f):
    out = []
    for t, _ in iter_terms(f):
        for n in support(t):
            if n not in out:
                out.append(n)
    return out


def formula_vars(f):
    out = []
    for t, _ in iter_terms(f):
        for v in terms.free_vars(t):
            if v not in out:
                out.append(v)
    return out


def permute_formula(pi, f):
    return map_terms(f, lambda t, d: permute(pi, t))


def apply_subst(theta, f):
    """Ordinary substitution application, term by term."""
    return map_terms(f, lambda t, d: terms.apply_ordinary(theta, t))


def apply_subst_nca(theta, f):
    """Capture-avoiding application: the whole formula is renamed with one
    permutation moving its support away from the substitution's."""
    sup_f = formula_support(f)
    sup_th = theta.support()
    clash = [n for n in sup_f if n in sup_th]
    if clash:
        pi = terms.avoiding_perm(clash, sup_f + sup_th)
        f = permute_formula(pi, f)
    return apply_subst(theta, f)


def strip_anns(f):
    def go(f):
        if isinstance(f, Atom):
            return Atom(f.pred, f.args, None)
        if isinstance(f, SpecAtom):
            return SpecAtom(f.ctx, f.goal, None)
        if isinstance(f, And):
            return And(go(f.left), go(f.right))
        if isinstance(f, Or):
            return Or(go(f.left), go(f.right))
        if isinstance(f, Imp):
            return Imp(go(f.left), go(f.right))
        if isinstance(f, Quant):
            return Quant(f.kind, f.hint, f.ty, go(f.body))
        return f
    return go(f)


def collect_anns(f):
    out = []
    def go(f):
        if isinstance(f, (Atom, SpecAtom)) and f.ann is not None:
            out.append(f.ann)
        elif isinstance(f, (And, Or, Imp)):
            go(f.left)
            go(f.right)
        elif isinstance(f, Quant):
            go(f.body)
    go(f)
    return out


def eq_modulo(f1, f2):
    """Equality up to normalization, ignoring annotations and binder hints."""
    return _canon(f1) == _canon(f2)


def _canon(f):
    f = strip_anns(normalize_formula(f))
    def drop_hints(f):
        if isinstance(f, Quant):
            return Quant(f.kind, "", f.ty, drop_hints(f.body))
        if isinstance(f, And):
            return And(drop_hints(f.left), drop_hints(f.right))
        if isinstance(f, Or):
            return Or(drop_hints(f.left), drop_hints(f.right))
        if isinstance(f, Imp):
            return Imp(drop_hints(f.left), drop_hints(f.right))
        return f
    return drop_hints(f)


def formula_perm_equiv(f1, f2):
    """A permutation pi with pi.f1 equal to f2 (annotations ignored), or None."""
    c1 = _canon(f1)
    c2 = _canon(f2)
    s1 = formula_support(c1)
    s2 = formula_support(c2)
    if len(s1) != len(s2):
        return None
    from itertools import permutations as iperm
    by_ty1 = {}
    by_ty2 = {}
    for n in s1:
        by_ty1.setdefault(n.ty, []).append(n)
    for n in s2:
        by_ty2.setdefault(n.ty, []).append(n)
    if set(by_ty1) != set(by_ty2):
        return None
    tys = list(by_ty1)

    def go(i, acc):
        if i == len(tys):
            pi = terms.Permutation(acc)
            if permute_formula(pi, c1) == c2:
                return pi
            return None
        if len(by_ty1[tys[i]]) != len(by_ty2[tys[i]]):
            return None
        for p in iperm(by_ty2[tys[i]]):
            acc2 = dict(acc)
            acc2.update(zip(by_ty1[tys[i]], p))
            r = go(i + 1, acc2)
            if r is not None:
                return r
        return None

    return go(0, {})


def set_ann(f, ann):
    if isinstance(f, Atom):
        return Atom(f.pred, f.args, ann)
    if isinstance(f, SpecAtom):
        return SpecAtom(f.ctx, f.goal, ann)
    raise TypeError("annotations only attach to atoms")


def get_ann(f):
    if isinstance(f, (Atom, SpecAtom)):
        return f.ann
    return None
