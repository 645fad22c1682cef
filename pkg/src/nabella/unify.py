"""Higher-order pattern unification.

Instantiatable variables are Var nodes whose names appear in the flex set.
Variables in the unrestricted set may pick up nominal constants that are
not in their argument list (used when applying lemmas, where a universally
quantified variable may be instantiated with any term in scope).
"""

import itertools

from .terms import (App, Arrow, Bound, Const, Lam, Nom, Subst, Term, Var,
                    app, arrow, free_vars, lam, normalize, spine, ty_args,
                    apply_ordinary, compose_ordinary)


class UnifyFailure(Exception):
    """No unifier exists."""


class NonPattern(Exception):
    """The problem falls outside the pattern fragment."""


class _Postpone(Exception):
    """A non-pattern equation that may become tractable once other
    equations have bound some of its variables."""


_counter = itertools.count(1)


def fresh_var(base, ty):
    return Var("%s'%d" % (base.split("'")[0], next(_counter)), ty)


_LOCAL = "'b"


def local_const(ty):
    """A scoped rigid constant standing for a bound variable."""
    return Const("%s%d" % (_LOCAL, next(_counter)), ty)


def is_local(t):
    return isinstance(t, Const) and t.name.startswith(_LOCAL)


def _is_flex(t, flex):
    return isinstance(t, Var) and t.name in flex


def _mentions_local(t):
    if isinstance(t, Lam):
        return _mentions_local(t.body)
    if isinstance(t, App):
        return _mentions_local(t.fn) or _mentions_local(t.arg)
    return is_local(t)


def _mentions_nom(t):
    if isinstance(t, Lam):
        return _mentions_nom(t.body)
    if isinstance(t, App):
        return _mentions_nom(t.fn) or _mentions_nom(t.arg)
    return isinstance(t, Nom)


def _spine_atom_ok(a):
    return isinstance(a, Nom) or is_local(a)


def unify(eqs, flex, unrestricted=frozenset()):
    """Unify the given list of term pairs.  Returns a Subst on success,
    raises UnifyFailure or NonPattern otherwise."""
    flex = set(flex)
    unrestricted = set(unrestricted)
    theta = Subst()
    work = [(normalize(a), normalize(b)) for a, b in eqs]

    def push_binding(name, t):
        nonlocal theta, work
        one = Subst({name: normalize(t)})
        theta = compose_ordinary(theta, one)
        work = [(apply_ordinary(one, a), apply_ordinary(one, b)) for a, b in work]

    def result_ty(f):
        # type of the term f's spine head applied to its args
        head, args = spine(f)
        ty = head.ty if not isinstance(head, Bound) else None
        if ty is None:
            raise NonPattern("bound variable head")
        for _ in args:
            ty = ty.right
        return ty

    def invert(t, mapping, depth, selfname, unres):
        """Rewrite t replacing mapped atoms by bound variables at the given
        binder depth; prune flexible subterms that mention disallowed atoms."""
        t = normalize(t)
        if isinstance(t, Lam):
            return Lam(t.argty, invert(t.body, mapping, depth + 1, selfname, unres))
        head, args = spine(t)
        if _is_flex(head, flex):
            if head.name == selfname:
                raise UnifyFailure("occurs check")
            norm_args = [normalize(a) for a in args]
            if any(not (isinstance(a, Bound) or _spine_atom_ok(a))
                   for a in norm_args):
                # Not a pattern spine (this happens in program clause bodies,
                # e.g. a variable applied to another variable).  Rewrite the
                # arguments in place; the head is left untouched.
                out = head
                for a in args:
                    out = App(out, invert(a, mapping, depth, selfname, unres))
                return out
            # every argument must itself be a pattern spine entry
            inv_args = []
            keep = []
            for a in args:
                a = normalize(a)
                if isinstance(a, Bound):
                    inv_args.append(a)
                    keep.append(True)
                elif _spine_atom_ok(a):
                    if a in mapping:
                        inv_args.append(Bound(mapping[a] + depth))
                        keep.append(True)
                    else:
                        # the outer variable cannot see this atom: prune it
                        inv_args.append(None)
                        keep.append(False)
                else:
                    raise NonPattern("argument of %s is not a variable" % head.name)
            if len(set(a for a in args)) != len(args):
                raise NonPattern("repeated arguments of %s" % head.name)
            if all(keep):
                return app(head, inv_args)
            # prune: head := lam args, head' (kept args)
            atys, _ = ty_args(head.ty)
            atys = atys[:len(args)]
            kept_tys = [ty for ty, k in zip(atys, keep) if k]
            res_ty = head.ty
            for _ in args:
                res_ty = res_ty.right
            h2 = fresh_var(head.name, arrow(kept_tys, res_ty))
            flex.add(h2.name)
            if head.name in unrestricted:
                unrestricted.add(h2.name)
            inner = app(h2, [Bound(len(args) - 1 - i)
                             for i, k in enumerate(keep) if k])
            push_binding(head.name, lam(atys, inner))
            return invert(apply_ordinary(theta, t), mapping, depth, selfname, unres)
        # rigid cases
        if head in mapping and not args:
            return Bound(mapping[head] + depth)
        if head in mapping:
            out = Bound(mapping[head] + depth)
        elif is_local(head):
            raise UnifyFailure("bound variable escapes its scope")
        elif isinstance(head, Nom):
            if not unres:
                raise UnifyFailure("nominal %s not in scope of the variable"
                                   % head.name)
            out = head
        elif isinstance(head, Bound):
            if head.index < depth:
                out = head
            else:
                raise UnifyFailure("bound variable escapes its scope")
        else:
            out = head
        for a in args:
            out = App(out, invert(a, mapping, depth, selfname, unres))
        return out

    def _try_bare_bind(x, t):
        """A bare flexible variable can be bound to any term it is allowed
        to see, whether or not the term lies in the pattern fragment."""
        if any(v.name == x.name for v in free_vars(t)):
            raise UnifyFailure("occurs check")
        if _mentions_local(t):
            return False
        if x.name not in unrestricted and _mentions_nom(t):
            return False
        push_binding(x.name, t)
        return True

    def solve_flex_rigid(x, xargs, rigid):
        if not xargs and _try_bare_bind(x, rigid):
            return
        if any(not _spine_atom_ok(normalize(a)) for a in xargs):
            # Outside the pattern fragment.  Peel off identical trailing
            # arguments shared with the rigid side and retry.
            rh, rargs = spine(normalize(rigid))
            xa = [normalize(a) for a in xargs]
            ra = [normalize(a) for a in rargs]
            stripped = False
            while xa and ra and xa[-1] == ra[-1]:
                xa.pop()
                ra.pop()
                stripped = True
            if stripped:
                work.append((app(x, xa), app(rh, ra)))
                return
            raise _Postpone("argument of %s is not atomic" % x.name)
        if len(set(xargs)) != len(xargs):
            raise NonPattern("repeated arguments of %s" % x.name)
        mapping = {a: len(xargs) - 1 - i for i, a in enumerate(xargs)}
        body = invert(rigid, mapping, 0, x.name, x.name in unrestricted)
        push_binding(x.name, lam([a.ty for a in xargs], body))

    def solve_flex_flex(x, xargs, y, yargs):
        if x.name != y.name:
            if not xargs and _try_bare_bind(x, app(y, yargs)):
                return
            if not yargs and _try_bare_bind(y, app(x, xargs)):
                return
        if any(not _spine_atom_ok(a) for a in xargs + yargs):
            # Outside the pattern fragment.  If one side still has a pattern
            # spine, invert the other side into it; flexible subterms are
            # handled by invert's pruning and rewriting rules.
            for u, uargs, w, wargs in ((x, xargs, y, yargs),
                                       (y, yargs, x, xargs)):
                ua = [normalize(a) for a in uargs]
                if all(_spine_atom_ok(a) for a in ua) and \
                        len(set(ua)) == len(ua):
                    solve_flex_rigid(u, uargs, app(w, wargs))
                    return
            # Failing that, peel off identical trailing arguments and retry
            # with the shortened spines.
            xa, ya = [normalize(a) for a in xargs], [normalize(a) for a in yargs]
            stripped = False
            while xa and ya and xa[-1] == ya[-1]:
                xa.pop()
                ya.pop()
                stripped = True
            if stripped:
                work.append((app(x, xa), app(y, ya)))
                return
            raise _Postpone("argument of %s/%s is not atomic" % (x.name, y.name))
        if len(set(xargs)) != len(xargs) or len(set(yargs)) != len(yargs):
            raise NonPattern("repeated variable arguments")
        if x.name == y.name:
            if len(xargs) != len(yargs):
                raise UnifyFailure("arity mismatch")
            keep = [i for i, (a, b) in enumerate(zip(xargs, yargs)) if a == b]
            atys, _ = ty_args(x.ty)
            atys = atys[:len(xargs)]
            res_ty = x.ty
            for _ in xargs:
                res_ty = res_ty.right
            h2 = fresh_var(x.name, arrow([atys[i] for i in keep], res_ty))
            flex.add(h2.name)
            body = app(h2, [Bound(len(xargs) - 1 - i) for i in keep])
            push_binding(x.name, lam(atys, body))
            return
        # if one spine covers the other, bind directly without a fresh var
        for u, uargs, w, wargs in ((x, xargs, y, yargs), (y, yargs, x, xargs)):
            if all(a in uargs for a in wargs):
                umap = {a: len(uargs) - 1 - i for i, a in enumerate(uargs)}
                body = app(w, [Bound(umap[a]) for a in wargs])
                push_binding(u.name, lam([a.ty for a in uargs], body))
                return
        common = [a for a in xargs if a in yargs]
        res_ty = x.ty
        for _ in xargs:
            res_ty = res_ty.right
        h2 = fresh_var(x.name, arrow([a.ty for a in common], res_ty))
        flex.add(h2.name)
        if x.name in unrestricted and y.name in unrestricted:
            unrestricted.add(h2.name)
        xmap = {a: len(xargs) - 1 - i for i, a in enumerate(xargs)}
        ymap = {a: len(yargs) - 1 - i for i, a in enumerate(yargs)}
        xbody = app(h2, [Bound(xmap[a]) for a in common])
        ybody = app(h2, [Bound(ymap[a]) for a in common])
        push_binding(x.name, lam([a.ty for a in xargs], xbody))
        push_binding(y.name, lam([a.ty for a in yargs], ybody))

    stuck = 0
    while work:
        a, b = work.pop()
        a = normalize(apply_ordinary(theta, a))
        b = normalize(apply_ordinary(theta, b))
        if a == b:
            stuck = 0
            continue
        try:
            if isinstance(a, Lam) or isinstance(b, Lam):
                ty = a.argty if isinstance(a, Lam) else b.argty
                c = local_const(ty)
                work.append((normalize(App(a, c)), normalize(App(b, c))))
                continue
            ha, aargs = spine(a)
            hb, bargs = spine(b)
            fa = _is_flex(ha, flex)
            fb = _is_flex(hb, flex)
            if fa and fb:
                solve_flex_flex(ha, aargs, hb, bargs)
            elif fa:
                solve_flex_rigid(ha, aargs, b)
            elif fb:
                solve_flex_rigid(hb, bargs, a)
            else:
                if ha != hb or len(aargs) != len(bargs):
                    raise UnifyFailure("clash: %r vs %r" % (ha, hb))
                work.extend(zip(aargs, bargs))
        except _Postpone as e:
            # set the equation aside; other equations may bind enough of
            # its variables to bring it back into the pattern fragment
            stuck += 1
            if stuck > len(work) + 1:
                raise NonPattern(str(e))
            work.insert(0, (a, b))
            continue
        stuck = 0

    return Subst({k: v for k, v in theta.mapping.items() if k in flex})


# ---------------------------------------------------------------------------
# outcome wrapper matching the documented interface

class Solved:
    def __init__(self, subst):
        self.subst = subst


class Failed:
    def __init__(self, reason=""):
        self.reason = reason


class OutsidePattern:
    def __init__(self, reason=""):
        self.reason = reason


def unify_outcome(eqs, flex, unrestricted=frozenset()):
    try:
        return Solved(unify(eqs, flex, unrestricted))
    except UnifyFailure as e:
        return Failed(str(e))
    except NonPattern as e:
        return OutsidePattern(str(e))
