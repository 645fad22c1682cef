"""Nominal abstraction: the generalized equality s |> t of the reasoning
logic, and the computation of complete solution sets for it."""

import itertools

from . import unify as U
from .terms import (App, Permutation, Subst, Var, abstract_noms, app,
                    apply_ordinary, arrow, compose_nca, free_vars,
                    fresh_nominals, normalize, perm_equiv, spine, support,
                    ty_args, typecheck)

DEGREE_CAP = 8


class DegreeError(Exception):
    pass


def fresh_var_name(base, avoid):
    base = base.rstrip("0123456789") or base
    if base not in avoid:
        return base
    i = 1
    while "%s%d" % (base, i) in avoid:
        i += 1
    return "%s%d" % (base, i)


def na_holds(lhs, rhs, degree):
    """Does lhs abstract rhs over `degree` distinct nominal constants?

    True when lhs converts to lam c1 .. cn, rhs for some choice of
    distinct nominals not free in lhs."""
    lhs = normalize(lhs)
    rhs = normalize(rhs)
    if degree == 0:
        return lhs == rhs
    atys, _ = ty_args(typecheck(lhs))
    if len(atys) < degree:
        return False
    atys = atys[:degree]
    sup_l = support(lhs)
    cands = [n for n in support(rhs) if n not in sup_l]
    extras = fresh_nominals(atys, sup_l + support(rhs))
    pool = cands + extras
    for sel in itertools.permutations(pool, degree):
        if any(c.ty != ty for c, ty in zip(sel, atys)):
            continue
        if normalize(abstract_noms(rhs, list(sel))) == lhs:
            return True
    return False


def na_solution_check(lhs, rhs, degree, theta):
    """Is theta a solution of lhs |> rhs?  The substitution is applied to
    the abstraction statement as one unit, capture-avoidingly."""
    from . import formulas as F
    f = F.apply_subst_nca(theta, F.NAbs(lhs, rhs, degree))
    return na_holds(f.lhs, f.rhs, degree)


def csnas(sig, lhs, rhs, degree, extra_flex=(), unrestricted=(), avoid=()):
    """A complete set of solutions for lhs |> rhs over the variables in sig
    (a dict from variable name to type).

    Returns a list of (subst, new_vars) pairs, new_vars giving the types of
    fresh variables appearing in the ranges.  Deduplicated up to
    permutations of nominal constants."""
    if degree > DEGREE_CAP:
        raise DegreeError("abstraction degree %d exceeds the cap %d"
                          % (degree, DEGREE_CAP))
    lhs = normalize(lhs)
    rhs = normalize(rhs)
    atys, _ = ty_args(typecheck(lhs))
    atys = atys[:degree]
    sup = support(lhs) + [n for n in support(rhs) if n not in support(lhs)]
    cs = fresh_nominals(atys, sup + [a for a in avoid])

    # Raise the variables in sig over the fresh nominals.  Unrestricted
    # variables (clause and lemma universals, which sit inside the scope of
    # every nominal) are raised over the existing nominals as well, so their
    # instantiations may mention them.
    raising = {}
    used = set(sig) | set(extra_flex)
    for h, ty in sig.items():
        over = sup + cs if h in unrestricted else cs
        if not over:
            continue
        h2 = fresh_var_name(h, used)
        used.add(h2)
        raising[h] = app(Var(h2, arrow([n.ty for n in over], ty)), over)
    sigma = Subst(raising)
    s = apply_ordinary(sigma, lhs)
    t = apply_ordinary(sigma, rhs)

    flex = set(v.name for b in raising.values() for v in free_vars(b))
    if degree == 0:
        flex |= set(sig)
    flex |= set(extra_flex)

    pool = support(t) + [c for c in cs if c not in support(t)]
    sols = []
    for sel in itertools.permutations(pool, degree):
        if any(c.ty != ty for c, ty in zip(sel, atys)):
            continue
        rest = _dedup([n for n in support(s) + support(t) + cs
                       if n not in sel])
        l1 = abstract_noms(s, rest)
        l2 = abstract_noms(abstract_noms(t, list(sel)), rest)
        try:
            rho = U.unify([(l1, l2)], set(flex), set(unrestricted))
        except U.UnifyFailure:
            continue
        theta = compose_nca(sigma, rho)
        theta = Subst({k: v for k, v in theta.mapping.items()
                       if k in sig or k in extra_flex})
        if not any(_equiv_sols(theta, prev, sig) for prev, _ in sols):
            sols.append((theta, _new_vars(theta, sig, extra_flex)))
    return sols


def _dedup(xs):
    out = []
    for x in xs:
        if x not in out:
            out.append(x)
    return out


def _new_vars(theta, sig, extra_flex):
    out = {}
    for t in theta.mapping.values():
        for v in free_vars(t):
            if v.name not in sig and v.name not in extra_flex:
                out[v.name] = v.ty
    return out


def _range_tuple(theta, names):
    t = Var("'solutions", None)
    for n in names:
        t = App(t, theta.mapping.get(n, Var(n, None)))
    return t


def _equiv_sols(t1, t2, sig):
    names = sorted(sig)
    a = _range_tuple(t1, names)
    b = _range_tuple(t2, names)
    return a == b or perm_equiv(a, b) is not None


def less_general(rho, theta, sig):
    """Is rho below theta over sig: does some sigma give
    rho ~ compose(theta, sigma) after restricting both to sig?"""
    names = set(sig)
    rho = rho.restrict(names)
    theta = theta.restrict(names)
    rho_sup = rho.support()
    th_sup = theta.support()
    pool = rho_sup + fresh_nominals([n.ty for n in th_sup], rho_sup + th_sup)
    for sel in itertools.permutations(pool, len(th_sup)):
        if any(c.ty != n.ty for c, n in zip(sel, th_sup)):
            continue
        pi = Permutation({n: c for n, c in zip(th_sup, sel)})
        thp = theta.permuted(pi)
        eqs = []
        flex = set()
        for x in names:
            lhs = thp.mapping.get(x, Var(x, sig[x]))
            rhs = rho.mapping.get(x, Var(x, sig[x]))
            eqs.append((lhs, rhs))
        for v in thp.range_vars():
            flex.add(v.name)
        for x in names:
            if x not in thp.mapping:
                flex.add(x)
        try:
            sigma = U.unify(eqs, flex, unrestricted=set(flex))
        except (U.UnifyFailure, U.NonPattern):
            continue
        if any(n in thp.support() for n in sigma.support()):
            continue
        return True
    return False
