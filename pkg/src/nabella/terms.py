"""Simply typed lambda terms over constants, nominal constants and eigenvariables.

Bound variables are de Bruijn indices.  The canonical form kept everywhere is
beta-normal and eta-contracted, so plain structural equality decides
convertibility.
"""

from dataclasses import dataclass
from itertools import permutations as iter_permutations


# ---------------------------------------------------------------------------
# types

class Ty:
    pass


@dataclass(frozen=True)
class Base(Ty):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Arrow(Ty):
    left: Ty
    right: Ty

    def __str__(self):
        l = str(self.left)
        if isinstance(self.left, Arrow):
            l = "(" + l + ")"
        return l + " -> " + str(self.right)


PROP = Base("prop")


def arrow(tys, result):
    """Build ty1 -> ... -> tyn -> result."""
    for t in reversed(tys):
        result = Arrow(t, result)
    return result


def ty_args(ty):
    """Split an arrow type into (argument types, final result type)."""
    args = []
    while isinstance(ty, Arrow):
        args.append(ty.left)
        ty = ty.right
    return args, ty


# ---------------------------------------------------------------------------
# terms

class Term:
    def __call__(self, *args):
        return app(self, list(args))


@dataclass(frozen=True)
class Bound(Term):
    """de Bruijn index, 0 is the innermost binder."""
    index: int


@dataclass(frozen=True)
class Const(Term):
    name: str
    ty: Ty


@dataclass(frozen=True)
class Nom(Term):
    """A nominal constant.  User-visible ones are named n1, n2, ..."""
    name: str
    ty: Ty


@dataclass(frozen=True)
class Var(Term):
    """An eigenvariable; whether it may be instantiated is decided by context."""
    name: str
    ty: Ty


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Lam(Term):
    argty: Ty
    body: Term


def app(fn, args):
    for a in args:
        fn = App(fn, a)
    return fn


def lam(tys, body):
    for t in reversed(tys):
        body = Lam(t, body)
    return body


def spine(t):
    """Decompose t into (head, [args])."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


# ---------------------------------------------------------------------------
# shifting / substitution of de Bruijn indices

def shift(t, by, depth=0):
    if isinstance(t, Bound):
        return Bound(t.index + by) if t.index >= depth else t
    if isinstance(t, App):
        return App(shift(t.fn, by, depth), shift(t.arg, by, depth))
    if isinstance(t, Lam):
        return Lam(t.argty, shift(t.body, by, depth + 1))
    return t


def subst_bound(t, repl, depth=0):
    """Replace index `depth` with repl (shifted as we go under binders)."""
    if isinstance(t, Bound):
        if t.index == depth:
            return shift(repl, depth)
        if t.index > depth:
            return Bound(t.index - 1)
        return t
    if isinstance(t, App):
        return App(subst_bound(t.fn, repl, depth), subst_bound(t.arg, repl, depth))
    if isinstance(t, Lam):
        return Lam(t.argty, subst_bound(t.body, repl, depth + 1))
    return t


def bound_free(t, idx, depth=0):
    """Does index idx (relative to depth) occur free in t?"""
    if isinstance(t, Bound):
        return t.index == idx + depth
    if isinstance(t, App):
        return bound_free(t.fn, idx, depth) or bound_free(t.arg, idx, depth)
    if isinstance(t, Lam):
        return bound_free(t.body, idx, depth + 1)
    return False


# ---------------------------------------------------------------------------
# normalization

def normalize(t):
    """Beta-normal, eta-contracted form.  E.g. (lam x, f x) collapses to f."""
    if isinstance(t, App):
        fn = normalize(t.fn)
        arg = normalize(t.arg)
        if isinstance(fn, Lam):
            return normalize(subst_bound(fn.body, arg))
        return App(fn, arg)
    if isinstance(t, Lam):
        body = normalize(t.body)
        if (isinstance(body, App) and body.arg == Bound(0)
                and not bound_free(body.fn, 0)):
            return shift(body.fn, -1)
        return Lam(t.argty, body)
    return t


# ---------------------------------------------------------------------------
# traversals

def _fold(t, f, acc):
    acc = f(t, acc)
    if isinstance(t, App):
        acc = _fold(t.fn, f, acc)
        acc = _fold(t.arg, f, acc)
    elif isinstance(t, Lam):
        acc = _fold(t.body, f, acc)
    return acc


def support(t):
    """Nominal constants occurring in t, in first occurrence order."""
    out = []
    def step(s, acc):
        if isinstance(s, Nom) and s not in acc:
            acc.append(s)
        return acc
    return _fold(normalize(t), step, out)


def free_vars(t):
    """Eigenvariables occurring in t, in first occurrence order."""
    out = []
    def step(s, acc):
        if isinstance(s, Var) and s not in acc:
            acc.append(s)
        return acc
    return _fold(t, step, out)


def consts_of(t):
    out = []
    def step(s, acc):
        if isinstance(s, Const) and s not in acc:
            acc.append(s)
        return acc
    return _fold(t, step, out)


def abstract_noms(t, noms):
    """lam-abstract the given nominals out of t: returns lam c1..cn, t."""
    def repl(s, depth):
        if isinstance(s, Nom):
            for i, c in enumerate(noms):
                if s == c:
                    # outermost nominal becomes the outermost binder
                    return Bound(depth + len(noms) - 1 - i)
            return s
        if isinstance(s, App):
            return App(repl(s.fn, depth), repl(s.arg, depth))
        if isinstance(s, Lam):
            return Lam(s.argty, repl(s.body, depth + 1))
        return s
    return lam([c.ty for c in noms], repl(t, 0))


# ---------------------------------------------------------------------------
# permutations of nominal constants

class Permutation:
    """A finite type-preserving bijection on nominal constants."""

    def __init__(self, mapping=None):
        self.mapping = dict(mapping or {})  # Nom -> Nom
        for a, b in self.mapping.items():
            if a.ty != b.ty:
                raise ValueError("permutation must preserve types")

    def apply_nom(self, n):
        return self.mapping.get(n, n)

    def inverse(self):
        return Permutation({b: a for a, b in self.mapping.items()})

    def __repr__(self):
        parts = ", ".join("%s->%s" % (a.name, b.name) for a, b in self.mapping.items())
        return "Perm{%s}" % parts


def permute(pi, t):
    if isinstance(t, Nom):
        return pi.apply_nom(t)
    if isinstance(t, App):
        return App(permute(pi, t.fn), permute(pi, t.arg))
    if isinstance(t, Lam):
        return Lam(t.argty, permute(pi, t.body))
    return t


def perm_equiv(t1, t2):
    """Find a permutation pi with pi.t1 == t2 (up to normalization), or None."""
    t1 = normalize(t1)
    t2 = normalize(t2)
    s1 = support(t1)
    s2 = support(t2)
    if len(s1) != len(s2):
        return None
    # group both supports by type; a bijection must respect types
    by_ty1 = {}
    by_ty2 = {}
    for n in s1:
        by_ty1.setdefault(n.ty, []).append(n)
    for n in s2:
        by_ty2.setdefault(n.ty, []).append(n)
    if set(by_ty1) != set(by_ty2):
        return None
    for ty in by_ty1:
        if len(by_ty1[ty]) != len(by_ty2[ty]):
            return None
    tys = list(by_ty1)

    def go(i, acc):
        if i == len(tys):
            pi = Permutation(acc)
            if permute(pi, t1) == t2:
                return pi
            return None
        src = by_ty1[tys[i]]
        for perm in iter_permutations(by_ty2[tys[i]]):
            acc2 = dict(acc)
            acc2.update(zip(src, perm))
            res = go(i + 1, acc2)
            if res is not None:
                return res
        return None

    return go(0, {})


# ---------------------------------------------------------------------------
# substitutions

class Subst:
    """Idempotent substitution from eigenvariable names to terms."""

    def __init__(self, mapping=None):
        self.mapping = dict(mapping or {})  # str -> Term

    def lookup(self, name):
        return self.mapping.get(name)

    def domain(self):
        return set(self.mapping)

    def support(self):
        out = []
        for t in self.mapping.values():
            for n in support(t):
                if n not in out:
                    out.append(n)
        return out

    def range_vars(self):
        out = []
        for t in self.mapping.values():
            for v in free_vars(t):
                if v not in out:
                    out.append(v)
        return out

    def restrict(self, names):
        return Subst({k: v for k, v in self.mapping.items() if k in names})

    def permuted(self, pi):
        return Subst({k: permute(pi, v) for k, v in self.mapping.items()})

    def items(self):
        return self.mapping.items()

    def __repr__(self):
        from . import syntax
        parts = ", ".join("%s/%s" % (syntax.print_term(t), k)
                          for k, t in sorted(self.mapping.items()))
        return "{%s}" % parts


def apply_ordinary(theta, t):
    """Plain application: replace each mapped eigenvariable, then renormalize.

    Range terms never contain free de Bruijn indices, so no shifting is
    needed when replacing under binders.
    """
    def repl(s):
        if isinstance(s, Var):
            r = theta.lookup(s.name)
            return r if r is not None else s
        if isinstance(s, App):
            return App(repl(s.fn), repl(s.arg))
        if isinstance(s, Lam):
            return Lam(s.argty, repl(s.body))
        return s
    return normalize(repl(t))


def _avoid_names(noms):
    return set(n.name for n in noms)


def fresh_nominal(ty, avoid):
    """Lowest-index nominal n1, n2, ... whose name is not used in avoid."""
    used = set()
    for a in avoid:
        used.add(a.name if isinstance(a, Nom) else a)
    i = 1
    while ("n%d" % i) in used:
        i += 1
    return Nom("n%d" % i, ty)


def fresh_nominals(tys, avoid):
    out = []
    names = set(a.name if isinstance(a, Nom) else a for a in avoid)
    for ty in tys:
        c = fresh_nominal(ty, names)
        names.add(c.name)
        out.append(c)
    return out


def avoiding_perm(noms, avoid):
    """Permutation renaming each of noms to something fresh for avoid."""
    mapping = {}
    names = set(_avoid_names(avoid)) | set(_avoid_names(noms))
    for n in noms:
        c = fresh_nominal(n.ty, names)
        names.add(c.name)
        mapping[n] = c
    return Permutation(mapping)


def apply_nca(theta, t):
    """Capture-avoiding application: rename t's nominals that clash with the
    substitution's support, then apply ordinarily."""
    sup_t = support(t)
    sup_th = theta.support()
    clash = [n for n in sup_t if n in sup_th]
    if clash:
        pi = avoiding_perm(clash, sup_t + sup_th)
        t = permute(pi, t)
    return apply_ordinary(theta, t)


def compose_ordinary(theta, rho):
    """theta then rho, as one substitution (plain composition)."""
    out = {k: apply_ordinary(rho, v) for k, v in theta.mapping.items()}
    for k, v in rho.mapping.items():
        if k not in out:
            out[k] = v
    return Subst(out)


def compose_nca(theta, rho):
    """Capture-avoiding composition: rename theta's support away from rho's
    before composing, so B<compose(theta,rho)> ~ B<theta><rho>."""
    sup_th = theta.support()
    sup_rho = rho.support()
    clash = [n for n in sup_th if n in sup_rho]
    if clash:
        pi = avoiding_perm(clash, sup_th + sup_rho)
        theta = theta.permuted(pi)
    return compose_ordinary(theta, rho)


# ---------------------------------------------------------------------------
# typing

class TypeError_(Exception):
    pass


def typecheck(t, sig=None, env=None):
    """Infer the type of t.  sig, when given, maps eigenvariable names to
    their declared types and is checked against Var annotations."""
    env = env or []
    if isinstance(t, Bound):
        if t.index >= len(env):
            raise TypeError_("unbound de Bruijn index %d" % t.index)
        return env[t.index]
    if isinstance(t, (Const, Nom)):
        return t.ty
    if isinstance(t, Var):
        if sig is not None and t.name in sig and sig[t.name] != t.ty:
            raise TypeError_("variable %s has type %s, expected %s"
                             % (t.name, t.ty, sig[t.name]))
        return t.ty
    if isinstance(t, App):
        fty = typecheck(t.fn, sig, env)
        aty = typecheck(t.arg, sig, env)
        if not isinstance(fty, Arrow):
            raise TypeError_("application of non-function")
        if fty.left != aty:
            raise TypeError_("argument type %s does not match %s" % (aty, fty.left))
        return fty.right
    if isinstance(t, Lam):
        bty = typecheck(t.body, sig, [t.argty] + env)
        return Arrow(t.argty, bty)
    raise TypeError_("not a term: %r" % (t,))
