"""The specification logic side: parsing logic-programming spec files,
encoding them as definitions (prog and seq), and an executable animator
that runs queries directly.
"""

import itertools

from . import formulas as F
from . import speclang, syntax
from . import unify as U
from .definitions import Clause, Definition, clause_nom
from .nabs import fresh_var_name
from .syntax import ParseError, Parser, TyVar
from .terms import (App, Arrow, Base, Const, Lam, Nom, Subst, Var, app,
                    apply_ordinary, arrow, compose_ordinary, free_vars,
                    fresh_nominal, normalize, spine, subst_bound, support,
                    ty_args)


class SpecError(Exception):
    pass


class NominalInClause(SpecError):
    pass


class SpecClause:
    """One program clause: forall univ, goals imply head."""

    def __init__(self, univ, head, goals):
        self.univ = dict(univ)       # name -> Ty
        self.head = head             # Term : atm
        self.goals = list(goals)     # Terms : frm

    def fresh(self, avoid):
        """Rename the clause variables apart from the given names."""
        taken = set(avoid)
        ren = {}
        univ = {}
        for name, ty in self.univ.items():
            f = fresh_var_name(name, taken)
            taken.add(f)
            ren[name] = Var(f, ty)
            univ[f] = ty
        rho = Subst(ren)
        return (univ, normalize(apply_ordinary(rho, self.head)),
                [normalize(apply_ordinary(rho, g)) for g in self.goals])

    def __repr__(self):
        return "SpecClause(%s)" % syntax.print_term(self.head)


class SpecProgram:
    def __init__(self):
        self.clauses = []
        self.quant_types = []        # argument types seen under pi/sigma


def _subparser(toks, symtab):
    p = Parser.__new__(Parser)
    p.toks = list(toks)
    p.pos = 0
    p.symtab = symtab
    p.ty_subst = {}
    p.var_types = {}
    p.free_order = []
    p.nom_types = {}
    return p


def _split_statements(toks):
    out = []
    cur = []
    for t in toks:
        if t == ("punct", "."):
            if cur:
                out.append(cur)
            cur = []
        else:
            cur.append(t)
    if cur:
        raise ParseError("spec file does not end with '.'")
    return out


def _collect_quant_types(t, acc):
    head, args = spine(t)
    if isinstance(head, Const) and head.name in ("pi", "sigma"):
        ty = head.ty.left.left
        if ty not in acc:
            acc.append(ty)
    for a in args:
        _collect_quant_types(a, acc)
    if isinstance(t, Lam):
        _collect_quant_types(t.body, acc)


def parse_spec(text, symtab):
    """Parse a spec file, declaring kinds and constants into the symbol
    table and returning the program."""
    prog = SpecProgram()
    for stmt in _split_statements(syntax.tokenize(text)):
        p = _subparser(stmt, symtab)
        k, v = p.peek()
        if k == "name" and v in ("kind", "Kind"):
            p.next()
            names = [p.expect("name")]
            while p.eat_punct(","):
                names.append(p.expect("name"))
            p.expect("name", "type")
            if not p.done():
                raise ParseError("trailing input in kind declaration")
            for n in names:
                symtab.declare_kind(n)
            continue
        if k == "name" and v in ("type", "Type"):
            p.next()
            names = [p.expect("name")]
            while p.eat_punct(","):
                names.append(p.expect("name"))
            ty = p.parse_ty()
            if not p.done():
                raise ParseError("trailing input in type declaration")
            for n in names:
                symtab.declare_const(n, ty)
            continue
        head, hty = p.parse_app([])
        p.unify_ty(hty, speclang.ATM, "clause head")
        goals = []
        if p.eat_punct(":-"):
            goals.append(p.parse_spec_unit([]))
            while p.eat_punct(","):
                goals.append(p.parse_spec_unit([]))
        if not p.done():
            raise ParseError("trailing input in clause")
        head = normalize(p.zonk_term(head, "clause head"))
        goals = [normalize(p.zonk_term(g, "clause body")) for g in goals]
        for t in [head] + goals:
            if support(t):
                raise NominalInClause(
                    "program clauses must not mention nominal constants")
            _collect_quant_types(t, prog.quant_types)
        univ = {name: p.zonk_ty(p.var_types[name], "clause variable")
                for name in p.free_order}
        prog.clauses.append(SpecClause(univ, head, goals))
    return prog


# ---------------------------------------------------------------------------
# encoding into the definition table

SPEC_KINDS = ["nt", "o", "olist", "frm"]
SPEC_CONSTS = [
    ("z", speclang.ZERO.ty),
    ("s", speclang.SUCC.ty),
    ("nil", speclang.NIL.ty),
    ("::", speclang.CONS.ty),
    ("tt", speclang.TT.ty),
    ("conj", speclang.CONJ.ty),
    ("disj", speclang.DISJ.ty),
    ("impl", speclang.IMPL.ty),
    ("inj", speclang.INJ.ty),
    ("nat", Arrow(speclang.NT, Base("prop"))),
    ("lt", Arrow(speclang.NT, Arrow(speclang.NT, Base("prop")))),
    ("member", Arrow(speclang.ATM,
                     Arrow(speclang.ATMLIST, Base("prop")))),
    ("prog", Arrow(speclang.ATM, Arrow(speclang.FRM, Base("prop")))),
    ("seq", Arrow(speclang.NT,
                  Arrow(speclang.ATMLIST,
                        Arrow(speclang.FRM, Base("prop"))))),
]


def declare_spec_symbols(symtab):
    for k in SPEC_KINDS:
        if k not in symtab.kinds:
            symtab.declare_kind(k)
    for name, ty in SPEC_CONSTS:
        if not symtab.has_const(name):
            symtab.declare_const(name, ty)


def parse_def_clause(text, symtab, var_types=None):
    """Parse one definitional clause `[nabla xs,] head [:= body]` into a
    Clause value."""
    p = Parser(text, symtab, var_types=var_types)
    binders = []
    if p.peek() == ("name", "nabla"):
        p.next()
        binders = p.parse_binders()
        p.expect("punct", ",")
    env = []
    for name, ty in binders:
        env = [(name, ty)] + env
    f = p.parse_predication(env)
    body = F.Top()
    if p.eat_punct(":="):
        body = p.parse_formula(env)
    if not p.done():
        raise ParseError("trailing input in clause")
    if not isinstance(f, F.Atom):
        raise ParseError("a clause head must be a predicate atom")
    f = p.zonk_formula(f, "clause head")
    body = p.zonk_formula(body, "clause body")
    noms = [clause_nom(p.zonk_ty(ty, "nabla binder")) for _, ty in binders]
    # nabla binders were parsed as loose bound variables; close them off
    def close(t, depth):
        for n in reversed(noms):
            t = subst_bound(t, n)
        return t
    head_args = tuple(normalize(close(a, 0)) for a in f.args)
    body = F.normalize_formula(F.map_terms(body, close))
    univ = {name: p.zonk_ty(p.var_types[name], "clause variable")
            for name in p.free_order}
    return Clause(f.pred, univ, noms, head_args, body), f.pred


def _mk_block(symtab, pred, flavor, clause_texts):
    ty = symtab.consts[pred]
    clauses = []
    for txt in clause_texts:
        c, p = parse_def_clause(txt, symtab)
        if p != pred:
            raise SpecError("clause for %s in a block for %s" % (p, pred))
        clauses.append(c)
    return Definition(pred, ty, flavor, clauses)


def encode_prog(prog, symtab):
    """The prog definition: one clause per program clause, packing the
    subgoals into a conjunction of the goal formulas."""
    clauses = []
    for sc in prog.clauses:
        body = speclang.TT
        for g in reversed(sc.goals):
            body = speclang.CONJ(g, body) if body != speclang.TT else g
        clauses.append(Clause("prog", dict(sc.univ), [],
                              (sc.head, normalize(body)), F.Top()))
    return Definition("prog", symtab.consts["prog"], "inductive", clauses)


def seq_clause_texts(quant_types):
    """The clauses of the seq encoding of spec provability, with one pi and
    one sigma clause per quantifier argument type in use."""
    out = [
        "seq (s N) L tt",
        "seq (s N) L (conj B C) := seq N L B /\\ seq N L C",
        "seq (s N) L (disj B C) := seq N L B \\/ seq N L C",
        "seq (s N) L (impl A B) := seq N (A :: L) B",
        "seq (s N) L (inj A) := member A L",
        "seq (s N) L (inj A) := exists B, prog A B /\\ seq N L B",
    ]
    for ty in quant_types:
        t = syntax.print_ty(ty)
        out.append("seq (s N) L (pi B) := nabla (x : %s), seq N L (B x)" % t)
        out.append("seq (s N) L (sigma B) := exists (x : %s), seq N L (B x)"
                   % t)
    return out


def install_seq_defs(defs, symtab, prog):
    """Install prog and the fixed seq/nat/member/lt definitions for the
    given program.  Replaces any previous spec encoding."""
    declare_spec_symbols(symtab)
    for pred in ("nat", "lt", "member", "prog", "seq"):
        defs.defs.pop(pred, None)
    defs.add_block([_mk_block(symtab, "nat", "inductive",
                              ["nat z", "nat (s N) := nat N"])])
    defs.add_block([_mk_block(symtab, "lt", "inductive",
                              ["lt z (s N)", "lt (s M) (s N) := lt M N"])])
    defs.add_block([_mk_block(symtab, "member", "inductive",
                              ["member A (A :: L)",
                               "member A (B :: L) := member A L"])])
    defs.add_block([encode_prog(prog, symtab)])
    defs.add_block([_mk_block(symtab, "seq", "inductive",
                              seq_clause_texts(prog.quant_types))])
    return defs


# ---------------------------------------------------------------------------
# the animator: direct uniform-proof search over the program

def animate(prog, goal, flex, depth=10, max_solutions=None):
    """Enumerate solutions of a spec goal term by uniform-proof search.

    goal is a frm term; flex maps the instantiatable variable names to
    their types.  Yields substitutions restricted to those names."""
    count = 0
    for theta in _animate(prog, [], goal, depth, set(flex), []):
        yield theta.restrict(set(flex))
        count += 1
        if max_solutions is not None and count >= max_solutions:
            return


def _animate(prog, ctx, goal, depth, flex, generics):
    goal = normalize(goal)
    head, args = spine(goal)
    if head == speclang.TT:
        yield Subst()
        return
    if head == speclang.CONJ and len(args) == 2:
        for t1 in _animate(prog, ctx, args[0], depth, flex, generics):
            g2 = apply_ordinary(t1, args[1])
            c2 = [apply_ordinary(t1, a) for a in ctx]
            for t2 in _animate(prog, c2, g2, depth,
                               flex | {v.name for v in t1.range_vars()}, generics):
                yield compose_ordinary(t1, t2)
        return
    if head == speclang.DISJ and len(args) == 2:
        for sub in args:
            for t in _animate(prog, ctx, sub, depth, flex, generics):
                yield t
        return
    if head == speclang.IMPL and len(args) == 2:
        for t in _animate(prog, ctx + [args[0]], args[1], depth, flex,
                          generics):
            yield t
        return
    if isinstance(head, Const) and head.name == "pi" and len(args) == 1:
        ty = head.ty.left.left
        c = fresh_nominal(ty, set(n.name for n in generics)
                          | {n.name for a in ctx + [goal]
                             for n in support(a)})
        for t in _animate(prog, ctx, App(args[0], c), depth, flex,
                          generics + [c]):
            # the generic constant must not leak into the answer
            if any(c in support(v) for v in t.mapping.values()):
                continue
            yield t
        return
    if isinstance(head, Const) and head.name == "sigma" and len(args) == 1:
        ty = head.ty.left.left
        v = U.fresh_var("X", arrow([g.ty for g in generics], ty))
        for t in _animate(prog, ctx, App(args[0], app(v, generics)), depth,
                          flex | {v.name}, generics):
            yield t
        return
    if head == speclang.INJ and len(args) == 1:
        if depth <= 0:
            return
        a = args[0]
        # context atoms first, then program clauses in file order
        for cand in ctx:
            try:
                theta = U.unify([(cand, a)], set(flex))
            except (U.UnifyFailure, U.NonPattern):
                continue
            yield theta
        for cl in prog.clauses:
            univ, h, goals = cl.fresh(flex | {g.name for g in generics})
            # clause variables may depend on the generics in scope
            raising = Subst({x: app(U.fresh_var(x, arrow(
                [g.ty for g in generics], ty_)), generics)
                for x, ty_ in univ.items()}) if generics else Subst()
            h = apply_ordinary(raising, h)
            goals = [apply_ordinary(raising, g) for g in goals]
            cvars = set(v.name for t in raising.mapping.values()
                        for v in free_vars(t)) if generics else set(univ)
            try:
                theta = U.unify([(h, a)], set(flex) | cvars)
            except (U.UnifyFailure, U.NonPattern):
                continue
            body = speclang.TT
            for g in reversed(goals):
                body = speclang.CONJ(g, body) \
                    if body != speclang.TT else g
            body = apply_ordinary(theta, body)
            c2 = [apply_ordinary(theta, x) for x in ctx]
            f2 = (set(flex) | cvars | {v.name for v in theta.range_vars()}) \
                - theta.domain()
            for t2 in _animate(prog, c2, body, depth - 1, f2, generics):
                yield compose_ordinary(theta, t2)
        return
    raise SpecError("not a spec goal: %s" % syntax.print_term(goal))


def run_query(prog, symtab, text, depth=10, max_solutions=None):
    """Parse and run a query; yields dicts from variable name to the
    printed answer term."""
    p = Parser(text, symtab)
    g = p.parse_spec_goal([])
    if not p.done():
        raise ParseError("trailing input after query")
    g = normalize(p.zonk_term(g, "query"))
    flex = {name: p.zonk_ty(p.var_types[name], "query variable")
            for name in p.free_order}
    for theta in animate(prog, g, flex, depth, max_solutions):
        out = {}
        for name in flex:
            if name in theta.domain():
                out[name] = theta.mapping[name]
            else:
                out[name] = Var(name, flex[name])
        yield out
