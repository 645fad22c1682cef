"""Concrete syntax: tokenizer, parsers and printers.

Terms are written with juxtaposition for application and `x\\ t` for
abstraction.  Capitalized identifiers are eigenvariables, names matching
n1, n2, ... are nominal constants, everything else must be a declared
constant or a bound name.
"""

import re

from . import speclang, terms
from .terms import (Arrow, Base, Bound, Const, Lam, Nom, PROP, Term, Ty, Var,
                    App, normalize, spine)
from . import formulas as F


class ParseError(Exception):
    pass


class NonSecondOrder(ParseError):
    """A clause or goal whose implication antecedent is not atomic."""


# ---------------------------------------------------------------------------
# tokens

PUNCTS = [":-", ":=", "::", "|-", "->", "=>", "\\/", "/\\", "|>",
          "\\", "(", ")", "{", "}", ",", ".", ";", ":", "=",
          "*", "@", "+", "#"]

TOKEN_RE = re.compile(
    r"""\s*(?:%[^\n]*\n?|(?P<str>"[^"]*")|(?P<name>[A-Za-z_][A-Za-z0-9_']*)
    |(?P<num>\d+)|(?P<punct>""" +
    "|".join(re.escape(p) for p in PUNCTS) + r"))", re.VERBOSE)


def tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError("unexpected character %r" % text[pos:pos + 1])
        pos = m.end()
        if m.lastgroup == "str":
            toks.append(("str", m.group("str")[1:-1]))
        elif m.lastgroup == "name":
            toks.append(("name", m.group("name")))
        elif m.lastgroup == "num":
            toks.append(("num", m.group("num")))
        elif m.lastgroup == "punct":
            toks.append(("punct", m.group("punct")))
    return toks


# ---------------------------------------------------------------------------
# signature

class SymTable:
    """Declared base types and constants."""

    def __init__(self):
        self.kinds = set()
        self.consts = {}

    def clone(self):
        s = SymTable()
        s.kinds = set(self.kinds)
        s.consts = dict(self.consts)
        return s

    def declare_kind(self, name):
        if name in self.kinds:
            raise ParseError("type %s already declared" % name)
        self.kinds.add(name)

    def declare_const(self, name, ty):
        if name in self.consts:
            raise ParseError("constant %s already declared" % name)
        self.consts[name] = ty

    def has_const(self, name):
        return name in self.consts


NOM_RE = re.compile(r"^n\d+$")


# ---------------------------------------------------------------------------
# type variables for inference

class TyVar(Ty):
    _next = [0]

    def __init__(self):
        self.id = TyVar._next[0]
        TyVar._next[0] += 1

    def __repr__(self):
        return "?t%d" % self.id

    def __hash__(self):
        return hash(("tyvar", self.id))

    def __eq__(self, other):
        return isinstance(other, TyVar) and self.id == other.id


class Parser:
    def __init__(self, text, symtab, var_types=None, nom_types=None):
        self.toks = tokenize(text)
        self.pos = 0
        self.symtab = symtab
        self.ty_subst = {}
        # free eigenvariables seen so far, name -> Ty (possibly a TyVar)
        self.var_types = dict(var_types or {})
        self.free_order = []
        self.nom_types = dict(nom_types or {})

    # -- token stream helpers

    def peek(self, k=0):
        if self.pos + k < len(self.toks):
            return self.toks[self.pos + k]
        return (None, None)

    def next(self):
        t = self.peek()
        self.pos += 1
        return t

    def expect(self, kind, val=None):
        k, v = self.next()
        if k != kind or (val is not None and v != val):
            raise ParseError("expected %s, found %r" % (val or kind, v))
        return v

    def at_punct(self, p):
        k, v = self.peek()
        return k == "punct" and v == p

    def eat_punct(self, p):
        if self.at_punct(p):
            self.next()
            return True
        return False

    def done(self):
        return self.pos >= len(self.toks)

    # -- type unification

    def resolve(self, ty):
        while isinstance(ty, TyVar) and ty.id in self.ty_subst:
            ty = self.ty_subst[ty.id]
        return ty

    def resolve_deep(self, ty):
        ty = self.resolve(ty)
        if isinstance(ty, Arrow):
            return Arrow(self.resolve_deep(ty.left), self.resolve_deep(ty.right))
        return ty

    def occurs(self, tv, ty):
        ty = self.resolve(ty)
        if isinstance(ty, TyVar):
            return ty.id == tv.id
        if isinstance(ty, Arrow):
            return self.occurs(tv, ty.left) or self.occurs(tv, ty.right)
        return False

    def unify_ty(self, a, b, what="term"):
        a = self.resolve(a)
        b = self.resolve(b)
        if isinstance(a, TyVar):
            if isinstance(b, TyVar) and b.id == a.id:
                return
            if self.occurs(a, b):
                raise ParseError("circular type for %s" % what)
            self.ty_subst[a.id] = b
            return
        if isinstance(b, TyVar):
            self.unify_ty(b, a, what)
            return
        if isinstance(a, Base) and isinstance(b, Base) and a == b:
            return
        if isinstance(a, Arrow) and isinstance(b, Arrow):
            self.unify_ty(a.left, b.left, what)
            self.unify_ty(a.right, b.right, what)
            return
        raise ParseError("type mismatch in %s: %s vs %s"
                         % (what, self.resolve_deep(a), self.resolve_deep(b)))

    # -- types

    def parse_ty(self):
        left = self.parse_aty()
        if self.eat_punct("->"):
            return Arrow(left, self.parse_ty())
        return left

    def parse_aty(self):
        if self.eat_punct("("):
            t = self.parse_ty()
            self.expect("punct", ")")
            return t
        name = self.expect("name")
        if name == "prop":
            return PROP
        if name not in self.symtab.kinds:
            raise ParseError("unknown type %s" % name)
        return Base(name)

    # -- terms

    def lookup_name(self, name, env):
        for i, (n, ty) in enumerate(env):
            if n == name:
                return Bound(i), ty
        if NOM_RE.match(name):
            if name not in self.nom_types:
                self.nom_types[name] = TyVar()
            return Nom(name, self.nom_types[name]), self.nom_types[name]
        if name in ("pi", "sigma"):
            tv = TyVar()
            mk = speclang.pi_const if name == "pi" else speclang.sigma_const
            c = mk(tv)
            return c, c.ty
        if self.symtab.has_const(name):
            ty = self.symtab.consts[name]
            return Const(name, ty), ty
        if name[0].isupper() or name[0] == "_":
            if name not in self.var_types:
                self.var_types[name] = TyVar()
                self.free_order.append(name)
            return Var(name, self.var_types[name]), self.var_types[name]
        raise ParseError("unknown constant %s" % name)

    def parse_term(self, env):
        """Full term: application chain with `::` as right-assoc infix."""
        t, ty = self.parse_app(env)
        if self.at_punct("::"):
            self.next()
            if not self.symtab.has_const("::"):
                raise ParseError(":: is not declared")
            cty = self.symtab.consts["::"]
            rest, rty = self.parse_term(env)
            self.unify_ty(ty, cty.left, "list element")
            self.unify_ty(rty, cty.right.left, "list tail")
            return App(App(Const("::", cty), t), rest), cty.right.right
        return t, ty

    def starts_atom(self):
        k, v = self.peek()
        if k == "name":
            return True
        return k == "punct" and v == "("

    def parse_app(self, env):
        t, ty = self.parse_atom(env)
        while self.starts_atom():
            a, aty = self.parse_atom(env)
            res = TyVar()
            self.unify_ty(ty, Arrow(aty, res), "application")
            t = App(t, a)
            ty = res
        return t, ty

    def parse_atom(self, env):
        if self.eat_punct("("):
            t, ty = self.parse_term(env)
            self.expect("punct", ")")
            return t, ty
        k, v = self.peek()
        if k != "name":
            raise ParseError("expected a term, found %r" % (v,))
        nk, nv = self.peek(1)
        if nk == "punct" and nv == "\\":
            self.next()
            self.next()
            argty = TyVar()
            body, bty = self.parse_lambody([(v, argty)] + env)
            return Lam(argty, body), Arrow(argty, bty)
        self.next()
        return self.lookup_name(v, env)

    def parse_lambody(self, env):
        # a lambda body extends as far to the right as an application chain
        return self.parse_term(env)

    # -- formulas

    def parse_formula(self, env=None):
        env = env if env is not None else []
        k, v = self.peek()
        if k == "name" and v in ("forall", "exists", "nabla"):
            self.next()
            binders = self.parse_binders()
            self.expect("punct", ",")
            inner = env
            for name, ty in binders:
                inner = [(name, ty)] + inner
            body = self.parse_formula(inner)
            for name, ty in reversed(binders):
                body = F.Quant(v, name, ty, body)
            return body
        return self.parse_imp(env)

    def parse_binders(self):
        out = []
        while True:
            k, v = self.peek()
            if k == "name":
                self.next()
                out.append((v, TyVar()))
            elif k == "punct" and v == "(":
                self.next()
                names = []
                while self.peek()[0] == "name":
                    names.append(self.next()[1])
                self.expect("punct", ":")
                ty = self.parse_ty()
                self.expect("punct", ")")
                out.extend((n, ty) for n in names)
            else:
                break
        if not out:
            raise ParseError("expected binder names")
        return out

    def parse_imp(self, env):
        left = self.parse_disj(env)
        if self.eat_punct("->"):
            return F.Imp(left, self.parse_imp_rest(env))
        return left

    def parse_imp_rest(self, env):
        k, v = self.peek()
        if k == "name" and v in ("forall", "exists", "nabla"):
            return self.parse_formula(env)
        return self.parse_imp(env)

    def parse_disj(self, env):
        left = self.parse_conj(env)
        while self.eat_punct("\\/"):
            left = F.Or(left, self.parse_conj(env))
        return left

    def parse_conj(self, env):
        left = self.parse_funit(env)
        while self.eat_punct("/\\"):
            left = F.And(left, self.parse_funit(env))
        return left

    def parse_funit(self, env):
        k, v = self.peek()
        if k == "name" and v == "true":
            self.next()
            return F.Top()
        if k == "name" and v == "false":
            self.next()
            return F.Bot()
        if k == "name" and v in ("forall", "exists", "nabla"):
            return self.parse_formula(env)
        if k == "punct" and v == "{":
            return self.parse_specatom(env)
        if k == "punct" and v == "(":
            # could be a parenthesized formula or a parenthesized term
            save = self.pos
            try:
                self.next()
                f = self.parse_formula(env)
                self.expect("punct", ")")
                if self.at_punct("=") or self.at_punct("|>"):
                    raise ParseError("term context")
                return f
            except ParseError:
                self.pos = save
        return self.parse_predication(env)

    def parse_predication(self, env):
        t, ty = self.parse_term(env)
        if self.at_punct("=") or self.at_punct("|>"):
            op = self.next()[1]
            rhs, rty = self.parse_term(env)
            if op == "=":
                self.unify_ty(ty, rty, "equation")
                return F.NAbs(t, rhs, 0)
            # abstraction at some positive degree, read off from the types
            lty = self.resolve_deep(ty)
            degree = 0
            while lty != self.resolve_deep(rty) and isinstance(lty, Arrow):
                lty = lty.right
                degree += 1
            self.unify_ty(lty, rty, "abstraction")
            if degree == 0:
                raise ParseError("|> needs a higher-order left side")
            return F.NAbs(t, rhs, degree)
        self.unify_ty(ty, PROP, "atom")
        ann = self.parse_ann()
        head, args = spine(t)
        if not isinstance(head, Const):
            raise ParseError("atom head must be a declared predicate")
        return F.Atom(head.name, tuple(args), ann)

    def parse_ann(self):
        for ch in ("*", "@", "+", "#"):
            if self.at_punct(ch):
                n = 0
                while self.eat_punct(ch):
                    n += 1
                return F.Annotation(ch, n)
        return None

    # -- spec sequents and goals

    def parse_specatom(self, env):
        self.expect("punct", "{")
        # decide if there is a context part by scanning for |- before }
        has_ctx = False
        depth = 0
        for k, v in self.toks[self.pos:]:
            if k == "punct" and v == "{":
                depth += 1
            elif k == "punct" and v == "}":
                if depth == 0:
                    break
                depth -= 1
            elif k == "punct" and v == "|-" and depth == 0:
                has_ctx = True
                break
        if has_ctx:
            ctx, cty = self.parse_term(env)
            self.unify_ty(cty, speclang.ATMLIST, "spec context")
            self.expect("punct", "|-")
        else:
            ctx = speclang.NIL
        goal = self.parse_spec_goal(env)
        self.expect("punct", "}")
        ann = self.parse_ann()
        return F.SpecAtom(ctx, goal, ann)

    def parse_spec_goal(self, env):
        left = self.parse_spec_conj(env)
        while self.eat_punct(";"):
            left = speclang.DISJ(left, self.parse_spec_conj(env))
        return left

    def parse_spec_conj(self, env):
        left = self.parse_spec_unit(env)
        while self.eat_punct(","):
            left = speclang.CONJ(left, self.parse_spec_unit(env))
        return left

    def parse_spec_unit(self, env):
        k, v = self.peek()
        if k == "name" and v in ("pi", "sigma") and self.peek(1)[0] == "name" \
                and self.peek(2) == ("punct", "\\"):
            self.next()
            binder = self.expect("name")
            self.expect("punct", "\\")
            argty = TyVar()
            body = self.parse_spec_unit([(binder, argty)] + env)
            mk = speclang.pi_const if v == "pi" else speclang.sigma_const
            return mk(argty)(Lam(argty, body))
        if k == "punct" and v == "(":
            save = self.pos
            self.next()
            g = self.parse_spec_goal(env)
            if self.eat_punct(")"):
                if self.at_punct("=>"):
                    self.next()
                    # (A) => G with A atomic
                    a = self.goal_as_atom(g)
                    return speclang.IMPL(a, self.parse_spec_unit(env))
                return g
            self.pos = save
        t, ty = self.parse_app(env)
        if self.at_punct("=>"):
            self.next()
            self.unify_ty(ty, speclang.ATM, "spec hypothesis")
            return speclang.IMPL(t, self.parse_spec_unit(env))
        ty = self.resolve(ty)
        if ty == speclang.FRM:
            return t
        if isinstance(ty, TyVar):
            self.unify_ty(ty, speclang.ATM, "spec atom")
            return speclang.INJ(t)
        self.unify_ty(ty, speclang.ATM, "spec atom")
        return speclang.INJ(t)

    def goal_as_atom(self, g):
        head, args = spine(g)
        if head == speclang.INJ and len(args) == 1:
            return args[0]
        raise NonSecondOrder("left of => must be atomic")

    # -- finishing: resolve leftover type variables

    def zonk_ty(self, ty, what="term"):
        ty = self.resolve(ty)
        if isinstance(ty, TyVar):
            default = getattr(self, "ty_default", None)
            if default is not None:
                self.ty_subst[ty.id] = default
                return default
            raise ParseError("cannot infer a type in %s" % what)
        if isinstance(ty, Arrow):
            return Arrow(self.zonk_ty(ty.left, what), self.zonk_ty(ty.right, what))
        return ty

    def zonk_term(self, t, what="term"):
        if isinstance(t, (Const, Nom, Var)):
            cls = type(t)
            return cls(t.name, self.zonk_ty(t.ty, what))
        if isinstance(t, App):
            return App(self.zonk_term(t.fn, what), self.zonk_term(t.arg, what))
        if isinstance(t, Lam):
            return Lam(self.zonk_ty(t.argty, what), self.zonk_term(t.body, what))
        return t

    def zonk_formula(self, f, what="formula"):
        if isinstance(f, F.Quant):
            return F.Quant(f.kind, f.hint, self.zonk_ty(f.ty, what),
                           self.zonk_formula(f.body, what))
        if isinstance(f, F.And):
            return F.And(self.zonk_formula(f.left, what), self.zonk_formula(f.right, what))
        if isinstance(f, F.Or):
            return F.Or(self.zonk_formula(f.left, what), self.zonk_formula(f.right, what))
        if isinstance(f, F.Imp):
            return F.Imp(self.zonk_formula(f.left, what), self.zonk_formula(f.right, what))
        if isinstance(f, F.Atom):
            return F.Atom(f.pred, tuple(self.zonk_term(a, what) for a in f.args), f.ann)
        if isinstance(f, F.NAbs):
            return F.NAbs(self.zonk_term(f.lhs, what), self.zonk_term(f.rhs, what), f.degree)
        if isinstance(f, F.SpecAtom):
            return F.SpecAtom(self.zonk_term(f.ctx, what), self.zonk_term(f.goal, what), f.ann)
        return f


# ---------------------------------------------------------------------------
# entry points

def parse_term(text, symtab, expected_ty=None, var_types=None, nom_types=None):
    p = Parser(text, symtab, var_types, nom_types)
    t, ty = p.parse_term([])
    if not p.done():
        raise ParseError("trailing input after term")
    if expected_ty is not None:
        p.unify_ty(ty, expected_ty)
    return normalize(p.zonk_term(t))


def parse_formula(text, symtab, var_types=None, nom_types=None):
    p = Parser(text, symtab, var_types, nom_types)
    f = p.parse_formula()
    if not p.done():
        raise ParseError("trailing input after formula")
    return F.normalize_formula(p.zonk_formula(f))


def parse_ty(text, symtab):
    p = Parser(text, symtab)
    ty = p.parse_ty()
    if not p.done():
        raise ParseError("trailing input after type")
    return ty


# ---------------------------------------------------------------------------
# printing

def print_ty(ty):
    return str(ty)


def _used_names(t, acc):
    if isinstance(t, (Const, Nom, Var)):
        acc.add(t.name)
    elif isinstance(t, App):
        _used_names(t.fn, acc)
        _used_names(t.arg, acc)
    elif isinstance(t, Lam):
        _used_names(t.body, acc)
    return acc


def _fresh_bound_name(hint, used):
    base = hint if hint else "x"
    if base not in used:
        return base
    i = 1
    while "%s%d" % (base, i) in used:
        i += 1
    return "%s%d" % (base, i)


def print_term(t, bound=None, prec=0, hint="x"):
    """prec 0: anywhere, 1: cons operand, 2: argument position."""
    bound = bound or []
    if isinstance(t, Bound):
        if t.index < len(bound):
            return bound[t.index]
        return "#%d" % t.index
    if isinstance(t, (Const, Nom, Var)):
        return t.name
    if isinstance(t, App):
        head, args = spine(t)
        if head == speclang.CONS and len(args) == 2:
            s = "%s :: %s" % (print_term(args[0], bound, 2),
                              print_term(args[1], bound, 1))
            return "(" + s + ")" if prec >= 2 else s
        s = " ".join([print_term(head, bound, 2)] +
                     [print_term(a, bound, 2) for a in args])
        return "(" + s + ")" if prec >= 2 else s
    if isinstance(t, Lam):
        used = _used_names(t.body, set()) | set(bound)
        name = _fresh_bound_name(hint, used)
        s = "%s\\ %s" % (name, print_term(t.body, [name] + bound, 0))
        return "(" + s + ")" if prec >= 1 else s
    return repr(t)


def print_ann(ann):
    return str(ann) if ann else ""


def print_formula(f, bound=None, prec=0):
    """prec levels: 0 top, 1 under ->, 2 under \\/, 3 under /\\."""
    bound = bound or []
    if isinstance(f, F.Top):
        return "true"
    if isinstance(f, F.Bot):
        return "false"
    if isinstance(f, F.Quant):
        names = []
        body = f
        used = _formula_names(f, set()) | set(bound)
        kind = f.kind
        while isinstance(body, F.Quant) and body.kind == kind:
            n = _fresh_bound_name(body.hint or "x", used)
            used.add(n)
            names.append(n)
            body = body.body
        inner = print_formula(body, list(reversed(names)) + bound, 0)
        s = "%s %s, %s" % (kind, " ".join(names), inner)
        return "(" + s + ")" if prec >= 1 else s
    if isinstance(f, F.Imp):
        s = "%s -> %s" % (print_formula(f.left, bound, 2),
                          print_formula(f.right, bound, 1))
        return "(" + s + ")" if prec >= 2 else s
    if isinstance(f, F.Or):
        s = "%s \\/ %s" % (print_formula(f.left, bound, 3),
                           print_formula(f.right, bound, 2))
        return "(" + s + ")" if prec >= 3 else s
    if isinstance(f, F.And):
        s = "%s /\\ %s" % (print_formula(f.left, bound, 4),
                           print_formula(f.right, bound, 3))
        return "(" + s + ")" if prec >= 4 else s
    if isinstance(f, F.Atom):
        parts = [f.pred] + [print_term(a, bound, 2) for a in f.args]
        s = " ".join(parts) + print_ann(f.ann)
        return "(" + s + ")" if prec >= 4 and len(parts) > 1 else s
    if isinstance(f, F.NAbs):
        op = "=" if f.degree == 0 else "|>"
        s = "%s %s %s" % (print_term(f.lhs, bound, 2), op,
                          print_term(f.rhs, bound, 2))
        return "(" + s + ")" if prec >= 4 else s
    if isinstance(f, F.SpecAtom):
        goal = print_spec_goal(f.goal, bound)
        if f.ctx == speclang.NIL:
            return "{%s}%s" % (goal, print_ann(f.ann))
        return "{%s |- %s}%s" % (print_term(f.ctx, bound, 1), goal,
                                 print_ann(f.ann))
    return repr(f)


def _formula_names(f, acc):
    for t, _ in F.iter_terms(f):
        _used_names(t, acc)
    return acc


def print_spec_goal(g, bound=None, prec=0):
    """prec 0: top (allows ; and ,), 1: conj operand, 2: unit."""
    bound = bound or []
    head, args = spine(g)
    if head == speclang.TT and not args:
        return "tt"
    if head == speclang.INJ and len(args) == 1:
        return print_term(args[0], bound, 1)
    if head == speclang.DISJ and len(args) == 2:
        s = "%s ; %s" % (print_spec_goal(args[0], bound, 1),
                         print_spec_goal(args[1], bound, 1))
        return "(" + s + ")" if prec >= 1 else s
    if head == speclang.CONJ and len(args) == 2:
        s = "%s , %s" % (print_spec_goal(args[0], bound, 2),
                         print_spec_goal(args[1], bound, 2))
        return "(" + s + ")" if prec >= 2 else s
    if head == speclang.IMPL and len(args) == 2:
        s = "%s => %s" % (print_term(args[0], bound, 2),
                          print_spec_goal(args[1], bound, 2))
        return "(" + s + ")" if prec >= 2 else s
    if isinstance(head, Const) and head.name in ("pi", "sigma") \
            and len(args) == 1 and isinstance(args[0], Lam):
        lam = args[0]
        used = _used_names(lam.body, set()) | set(bound)
        n = _fresh_bound_name("x", used)
        s = "%s %s\\ %s" % (head.name, n,
                            print_spec_goal(lam.body, [n] + bound, 2))
        return "(" + s + ")" if prec >= 2 else s
    return print_term(g, bound, 1)
