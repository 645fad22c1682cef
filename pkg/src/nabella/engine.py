"""The sequent engine: proof states, tactics and search.

A proof state is a list of open sequents; tactics act on the first one and
replace it with their subgoals.  Undo is handled a level up by snapshotting
whole states.
"""

import itertools

from . import formulas as F
from . import nabs, speclang, syntax
from . import unify as U
from .definitions import (DefTable, clause_nom, head_tuple_const,
                          translate_pattern_def)
from .terms import (App, Base, Bound, Const, Lam, Nom, PROP, Permutation,
                    Subst, Term, Ty, Var, abstract_noms, app, apply_ordinary,
                    arrow, compose_ordinary, free_vars, fresh_nominal,
                    fresh_nominals, lam,
                    normalize, perm_equiv, spine, support, ty_args, typecheck)
from .nabs import fresh_var_name


class ProofError(Exception):
    pass


class AnnotationViolation(ProofError):
    pass


class NotInductive(ProofError):
    pass


class NotCoinductive(ProofError):
    pass


class NominalInInvariant(ProofError):
    pass


class Settings:
    def __init__(self):
        self.search_depth = 5
        self.nabla_types = None     # None: every base type except prop
        self.unstratified = False

    def copy(self):
        s = Settings()
        s.__dict__.update(self.__dict__)
        return s

    def nabla_ok(self, ty):
        if not isinstance(ty, Base) or ty == PROP:
            return False
        if self.nabla_types is None:
            return True
        return ty.name in self.nabla_types


class Env:
    """Everything a tactic needs besides the sequent: definitions, proved
    lemmas, the loaded specification program, settings and the symbol
    table used for parsing tactic arguments."""

    def __init__(self, defs=None, lemmas=None, prog=None, settings=None,
                 symtab=None):
        self.defs = defs if defs is not None else DefTable()
        self.lemmas = lemmas if lemmas is not None else {}
        self.prog = prog
        self.settings = settings if settings is not None else Settings()
        self.symtab = symtab


class Sequent:
    def __init__(self, goal, sig=None, hyps=None, counter=1):
        self.sig = dict(sig or {})
        self.hyps = list(hyps or [])   # (name, formula)
        self.goal = goal
        self.counter = counter

    def copy(self):
        return Sequent(self.goal, self.sig, list(self.hyps), self.counter)

    def hyp(self, name):
        for n, f in self.hyps:
            if n == name:
                return f
        raise ProofError("no hypothesis named %s" % name)

    def set_hyp(self, name, f):
        self.hyps = [(n, f if n == name else g) for n, g in self.hyps]

    def drop_hyp(self, name):
        self.hyps = [(n, f) for n, f in self.hyps if n != name]

    def add_hyp(self, f, base="H"):
        if base == "H":
            name = "H%d" % self.counter
            self.counter += 1
        else:
            taken = set(n for n, _ in self.hyps)
            name = base if base not in taken else None
            i = 1
            while name is None:
                cand = "%s%d" % (base, i)
                if cand not in taken:
                    name = cand
                i += 1
        self.hyps.append((name, f))
        return name

    def all_noms(self):
        out = {}
        for _, f in self.hyps:
            for n in F.formula_support(f):
                out[n.name] = n.ty
        for n in F.formula_support(self.goal):
            out[n.name] = n.ty
        return out

    def fresh_nom(self, ty):
        return fresh_nominal(ty, set(self.all_noms()))

    def fresh_var(self, base, ty):
        name = fresh_var_name(base, set(self.sig))
        self.sig[name] = ty
        return Var(name, ty)


class ProofState:
    def __init__(self, goal, env):
        self.env = env
        self.subgoals = [Sequent(goal)]

    def copy(self):
        st = ProofState.__new__(ProofState)
        st.env = self.env
        st.subgoals = [s.copy() for s in self.subgoals]
        return st

    @property
    def done(self):
        return not self.subgoals

    def focused(self):
        if not self.subgoals:
            raise ProofError("no subgoals left")
        return self.subgoals[0]

    def replace_focused(self, new):
        self.subgoals = list(new) + self.subgoals[1:]


# ---------------------------------------------------------------------------
# substitution over whole sequents

def prettify_solution(theta, newvars, seq):
    """Rename machine-generated variables in a solution to readable ones.
    The renamings are merged into the substitution so that formulas still
    mentioning the old names can be fixed up by applying it."""
    taken = set(seq.sig) | set(theta.domain())
    ren = {}
    out_vars = {}
    for name, ty in newvars.items():
        pretty = fresh_var_name(name.split("'")[0] or "X", taken)
        taken.add(pretty)
        if pretty != name:
            ren[name] = Var(pretty, ty)
        out_vars[pretty] = ty
    if ren:
        mapping = {k: apply_ordinary(Subst(ren), v)
                   for k, v in theta.mapping.items()}
        mapping.update(ren)
        theta = Subst(mapping)
    return theta, out_vars


def _surviving_vars(theta, univ, newvars):
    """Clause or lemma variables left uninstantiated by a solution become
    new sequent variables."""
    out = dict(newvars)
    for name, ty in univ.items():
        if name not in theta.domain():
            out[name] = ty
    return out


def apply_solution(seq, theta, newvars):
    """New sequent with theta applied to every formula and the signature
    updated: instantiated variables leave, raised ones enter.  The solution
    is expected to have gone through prettify_solution already."""
    s2 = seq.copy()
    s2.sig = {k: v for k, v in seq.sig.items() if k not in theta.domain()}
    s2.sig.update(newvars)
    s2.hyps = [(n, F.apply_subst(theta, f)) for n, f in seq.hyps]
    s2.goal = F.apply_subst(theta, seq.goal)
    return s2


# ---------------------------------------------------------------------------
# intros

def goal_prefix(goal):
    """Split a goal into (binders, premises, conclusion) along its
    forall/nabla prefix and implication chain."""
    binders = []
    while isinstance(goal, F.Quant) and goal.kind in ("forall", "nabla"):
        binders.append((goal.kind, goal.hint, goal.ty))
        goal = goal.body
    prems = []
    while isinstance(goal, F.Imp):
        prems.append(goal.left)
        goal = goal.right
    return binders, prems, goal


def intros(state):
    seq = state.focused().copy()
    while True:
        g = seq.goal
        if isinstance(g, F.Quant) and g.kind == "forall":
            sup = F.formula_support(g)
            hint = g.hint if g.hint and g.hint[0].isupper() else \
                (g.hint.upper() if g.hint else "X")
            v = seq.fresh_var(hint, arrow([c.ty for c in sup], g.ty))
            seq.goal = F.open_quant(g, app(v, sup))
        elif isinstance(g, F.Quant) and g.kind == "nabla":
            if not state.env.settings.nabla_ok(g.ty):
                raise ProofError("nabla is not permitted at type %s" % g.ty)
            c = seq.fresh_nom(g.ty)
            seq.goal = F.open_quant(g, c)
        elif isinstance(g, F.Imp):
            seq.add_hyp(g.left)
            seq.goal = g.right
        else:
            break
    state.replace_focused([seq])


# ---------------------------------------------------------------------------
# case analysis

def _decompose(seq, f, mark):
    """Break a case-analysis result formula into alternative hypothesis
    lists, opening exists/nabla eagerly.  An impossible alternative
    (containing false) yields nothing."""
    f = F.normalize_formula(f)
    if isinstance(f, F.Top):
        return [[]]
    if isinstance(f, F.Bot):
        return []
    if isinstance(f, F.And):
        out = []
        for l in _decompose(seq, f.left, mark):
            for r in _decompose(seq, f.right, mark):
                out.append(l + r)
        return out
    if isinstance(f, F.Or):
        return _decompose(seq, f.left, mark) + _decompose(seq, f.right, mark)
    if isinstance(f, F.Quant) and f.kind == "exists":
        sup = F.formula_support(f)
        hint = f.hint.upper() if f.hint else "X"
        v = seq.fresh_var(hint, arrow([c.ty for c in sup], f.ty))
        return _decompose(seq, F.open_quant(f, app(v, sup)), mark)
    if isinstance(f, F.Quant) and f.kind == "nabla":
        avoid = set(seq.all_noms()) | set(n.name for n in F.formula_support(f))
        c = fresh_nominal(f.ty, avoid)
        return _decompose(seq, F.open_quant(f, c), mark)
    return [[mark(f)]]


def _child_ann(ann):
    if ann is None:
        return None
    if ann.kind in ("@", "*"):
        return F.Annotation("*", ann.level)
    if ann.kind in ("#", "+"):
        raise AnnotationViolation(
            "cannot case-analyse a coinductively annotated hypothesis")
    return None


def case(state, hypname, keep=False):
    seq = state.focused()
    f = seq.hyp(hypname)
    f = F.normalize_formula(f)
    env = state.env

    if isinstance(f, F.Bot):
        state.replace_focused([])
        return
    if isinstance(f, F.Top):
        s2 = seq.copy()
        s2.drop_hyp(hypname)
        state.replace_focused([s2])
        return
    if isinstance(f, (F.And, F.Or, F.Quant)):
        if isinstance(f, F.Quant) and f.kind == "forall":
            raise ProofError("cannot case-analyse a universal hypothesis; "
                             "use apply or inst")
        s0 = seq.copy()
        if not keep:
            s0.drop_hyp(hypname)
        outs = []
        for alt in _decompose(s0, f, lambda g: g):
            s2 = s0.copy()
            for g in alt:
                s2.add_hyp(g)
            outs.append(s2)
        state.replace_focused(outs)
        return
    if isinstance(f, F.NAbs):
        sols = nabs.csnas(dict(seq.sig), f.lhs, f.rhs, f.degree,
                          avoid=set(seq.all_noms()))
        outs = []
        for theta, newvars in sols:
            theta, newvars = prettify_solution(theta, newvars, seq)
            s2 = apply_solution(seq, theta, newvars)
            if not keep:
                s2.drop_hyp(hypname)
            outs.append(s2)
        state.replace_focused(outs)
        return
    if isinstance(f, F.Atom):
        state.replace_focused(_case_atom(seq, env, hypname, f, keep))
        return
    if isinstance(f, F.SpecAtom):
        state.replace_focused(_case_spec(seq, env, hypname, f, keep))
        return
    raise ProofError("cannot case-analyse this hypothesis")


def _rename_clause(c, seq):
    """Fresh copies of a clause's variables and nabla positions against the
    sequent; returns (univ map, noms, head_args, body)."""
    taken = set(seq.sig)
    ren = {}
    univ = {}
    for name, ty in c.univ.items():
        fresh = fresh_var_name(name, taken)
        taken.add(fresh)
        ren[name] = Var(fresh, ty)
        univ[fresh] = ty
    zs = [clause_nom(n.ty) for n in c.nabla]
    znames = {old: new for old, new in zip(c.nabla, zs)}
    rho = Subst(ren)

    def fix(t, d):
        t = apply_ordinary(rho, t)
        pi = Permutation(znames)
        from .terms import permute
        return permute(pi, t)

    head_args = [fix(a, 0) for a in c.head_args]
    body = F.map_terms(c.body, fix)
    return univ, zs, head_args, body


def _mark_pred(f, pred, ann):
    """Annotate every occurrence of the predicate (and spec judgments, for
    seq-encoded bodies) in a case result."""
    if ann is None:
        return f
    def go(g):
        if isinstance(g, F.Atom) and g.pred == pred:
            return F.Atom(g.pred, g.args, ann)
        if isinstance(g, F.And):
            return F.And(go(g.left), go(g.right))
        if isinstance(g, F.Or):
            return F.Or(go(g.left), go(g.right))
        if isinstance(g, F.Imp):
            return F.Imp(go(g.left), go(g.right))
        if isinstance(g, F.Quant):
            return F.Quant(g.kind, g.hint, g.ty, go(g.body))
        return g
    return go(f)


def _case_atom(seq, env, hypname, f, keep):
    d = env.defs.get(f.pred)
    if d is None:
        raise ProofError("%s is not a defined predicate" % f.pred)
    child = _child_ann(f.ann)
    tup = head_tuple_const(f.pred, d.ty)
    rhs = normalize(app(tup, list(f.args)))
    outs = []
    for c in d.clauses:
        univ, zs, head_args, body = _rename_clause(c, seq)
        lhs = normalize(abstract_noms(app(tup, head_args), zs))
        sig = dict(seq.sig)
        sig.update(univ)
        sols = nabs.csnas(sig, lhs, rhs, len(zs), unrestricted=set(univ),
                          avoid=set(seq.all_noms()))
        for theta, newvars in sols:
            newvars = _surviving_vars(theta, univ, newvars)
            theta, newvars = prettify_solution(theta, newvars, seq)
            s2 = apply_solution(seq, theta, newvars)
            if not keep:
                s2.drop_hyp(hypname)
            inst_body = F.apply_subst(theta, body)
            inst_body = _mark_pred(inst_body, f.pred, child)
            for alt in _decompose(s2, inst_body, lambda g: g):
                s3 = s2.copy()
                for g in alt:
                    s3.add_hyp(g)
                outs.append(s3)
    return outs


# -- case analysis of a spec sequent hypothesis

def _spec_child(ann):
    if ann is None:
        return None
    if ann.kind in ("@", "*"):
        return F.Annotation("*", ann.level)
    raise AnnotationViolation("bad annotation on a spec judgment")


def _case_spec(seq, env, hypname, f, keep):
    child = _spec_child(f.ann)
    g = normalize(f.goal)
    head, args = spine(g)

    def structural(alts):
        """One or more branches, each a list of new hypothesis formulas."""
        outs = []
        for alt in alts:
            s2 = seq.copy()
            if not keep:
                s2.drop_hyp(hypname)
            for h in alt:
                s2.add_hyp(h)
            outs.append(s2)
        return outs

    if head == speclang.TT:
        return structural([[]])
    if head == speclang.CONJ and len(args) == 2:
        return structural([[F.SpecAtom(f.ctx, args[0], child),
                            F.SpecAtom(f.ctx, args[1], child)]])
    if head == speclang.DISJ and len(args) == 2:
        return structural([[F.SpecAtom(f.ctx, args[0], child)],
                           [F.SpecAtom(f.ctx, args[1], child)]])
    if head == speclang.IMPL and len(args) == 2:
        return structural([[F.SpecAtom(speclang.CONS(args[0], f.ctx),
                                       args[1], child)]])
    if isinstance(head, Const) and head.name == "pi" and len(args) == 1:
        c = seq.fresh_nom(head.ty.left.left)
        return structural([[F.SpecAtom(f.ctx, normalize(App(args[0], c)),
                                       child)]])
    if isinstance(head, Const) and head.name == "sigma" and len(args) == 1:
        sup = F.formula_support(f)
        outs = structural([[]])
        for s2 in outs:
            v = s2.fresh_var("X", arrow([n.ty for n in sup],
                                        head.ty.left.left))
            s2.add_hyp(F.SpecAtom(f.ctx, normalize(App(args[0], app(v, sup))),
                                  child))
        return outs
    if head == speclang.INJ and len(args) == 1:
        a = args[0]
        outs = []
        # the atom can come from the context (trivially closed when nil) ...
        if normalize(f.ctx) != speclang.NIL:
            s2 = seq.copy()
            if not keep:
                s2.drop_hyp(hypname)
            s2.add_hyp(F.Atom("member", (a, f.ctx), None))
            outs.append(s2)
        # ... or from backchaining on a program clause
        for cl in (env.prog.clauses if env.prog else []):
            univ, head_t, goals = cl.fresh(set(seq.sig))
            sig = dict(seq.sig)
            sig.update(univ)
            sols = nabs.csnas(sig, head_t, a, 0, unrestricted=set(univ),
                              avoid=set(seq.all_noms()))
            for theta, newvars in sols:
                newvars = _surviving_vars(theta, univ, newvars)
                theta, newvars = prettify_solution(theta, newvars, seq)
                s2 = apply_solution(seq, theta, newvars)
                if not keep:
                    s2.drop_hyp(hypname)
                for gt in goals:
                    s2.add_hyp(F.SpecAtom(
                        normalize(apply_ordinary(theta, f.ctx)),
                        normalize(apply_ordinary(theta, gt)), child))
                outs.append(s2)
        return outs
    raise ProofError("cannot case-analyse this spec judgment")


# ---------------------------------------------------------------------------
# unfold

def _match_clause_against(seq, c, goal_args, d, extra_flex=(), depth_noms=()):
    """Try to match a clause head against goal arguments without touching
    the sequent's variables.  Yields (theta, body) pairs."""
    univ, zs, head_args, body = _rename_clause(c, seq)
    tup = head_tuple_const(d.pred, d.ty)
    lhs = normalize(abstract_noms(app(tup, head_args), zs))
    rhs = normalize(app(tup, list(goal_args)))
    flex = set(univ) | set(extra_flex)
    unres = set(univ) | set(extra_flex)
    degree = len(zs)
    if degree == 0:
        tries = [rhs]
    else:
        sup = support(rhs)
        atys = [z.ty for z in zs]
        extras = fresh_nominals(atys, sup + list(seq.all_noms()))
        pool = sup + extras
        tries = []
        for sel in itertools.permutations(pool, degree):
            if any(c2.ty != ty for c2, ty in zip(sel, atys)):
                continue
            tries.append(abstract_noms(rhs, list(sel)))
    for target in tries:
        try:
            theta = U.unify([(lhs, target)], flex, unres)
        except (U.UnifyFailure, U.NonPattern):
            continue
        yield theta, body, univ


def unfold(state, clause_num=None):
    seq = state.focused()
    env = state.env
    g = F.normalize_formula(seq.goal)
    if isinstance(g, F.SpecAtom):
        _unfold_spec(state, seq, g)
        return
    if not isinstance(g, F.Atom):
        raise ProofError("unfold expects an atomic goal")
    d = env.defs.get(g.pred)
    if d is None:
        raise ProofError("%s is not a defined predicate" % g.pred)
    if g.ann is not None and g.ann.kind == "+":
        raise AnnotationViolation("cannot unfold a coinduction hypothesis "
                                  "conclusion again")
    child = None
    if g.ann is not None and g.ann.kind == "#":
        child = F.Annotation("+", g.ann.level)
    clauses = d.clauses
    if clause_num is not None:
        if not 1 <= clause_num <= len(clauses):
            raise ProofError("no clause %d for %s" % (clause_num, g.pred))
        clauses = [clauses[clause_num - 1]]
    for c in clauses:
        for theta, body, univ in _match_clause_against(seq, c, g.args, d):
            newvars = _surviving_vars(theta, univ, {})
            for t in theta.mapping.values():
                for v in free_vars(t):
                    if v.name not in seq.sig and v.name not in univ:
                        newvars[v.name] = v.ty
            theta, newvars = prettify_solution(theta, newvars, seq)
            s2 = seq.copy()
            s2.sig.update(newvars)
            s2.goal = _mark_pred(F.apply_subst(theta, body), g.pred, child)
            state.replace_focused([s2])
            return
    raise ProofError("unfold: no clause head matches the goal")


def _unfold_spec(state, seq, g):
    env = state.env
    head, args = spine(normalize(g.goal))
    if head != speclang.INJ or len(args) != 1 or env.prog is None:
        raise ProofError("unfold on a spec goal expects an atomic judgment")
    a = args[0]
    for cl in env.prog.clauses:
        univ, head_t, goals = cl.fresh(set(seq.sig))
        try:
            theta = U.unify([(head_t, a)], set(univ), set(univ))
        except (U.UnifyFailure, U.NonPattern):
            continue
        newvars = _surviving_vars(theta, univ, {})
        theta, newvars = prettify_solution(theta, newvars, seq)
        outs = []
        for gt in goals:
            s2 = seq.copy()
            s2.sig.update(newvars)
            s2.goal = F.SpecAtom(g.ctx, normalize(apply_ordinary(theta, gt)),
                                 None)
            outs.append(s2)
        state.replace_focused(outs)
        return
    raise ProofError("unfold: no program clause matches")


# ---------------------------------------------------------------------------
# induction and coinduction

def _max_ann_level(f):
    return max([a.level for a in F.collect_anns(f)] + [0])


def _annotate_premise(conj, idx, ann, defs, require="inductive"):
    """Rebuild one implication-chain goal with premise number idx annotated."""
    def rebuild(g):
        if isinstance(g, F.Quant) and g.kind in ("forall", "nabla"):
            return F.Quant(g.kind, g.hint, g.ty, rebuild(g.body))
        prems = []
        while isinstance(g, F.Imp):
            prems.append(g.left)
            g = g.right
        if not 1 <= idx <= len(prems):
            raise ProofError("no premise %d in the goal" % idx)
        prems[idx - 1] = mark(prems[idx - 1])
        return F.imp(prems, g)

    def mark(p):
        if isinstance(p, F.Quant) and p.kind == "nabla":
            return F.Quant(p.kind, p.hint, p.ty, mark(p.body))
        if isinstance(p, F.Atom):
            d = defs.get(p.pred)
            if d is None or d.flavor != "inductive":
                raise NotInductive("induction needs an inductively defined "
                                   "premise, but %s is %s"
                                   % (p.pred, d.flavor if d else "not defined"))
            return F.Atom(p.pred, p.args, ann)
        if isinstance(p, F.SpecAtom):
            return F.SpecAtom(p.ctx, p.goal, ann)
        raise ProofError("induction premise must be an atom or spec judgment")

    return rebuild(conj)


def induction(state, idxs):
    seq = state.focused().copy()
    g = seq.goal
    conjs = F.conjuncts(g) if len(idxs) > 1 else [g]
    if len(idxs) != len(conjs):
        raise ProofError("induction needs one premise index per conjunct "
                         "of the goal")
    k = _max_ann_level(g) + 1
    ihs = []
    new_conjs = []
    for conj, idx in zip(conjs, idxs):
        ihs.append(_annotate_premise(conj, idx, F.Annotation("*", k),
                                     state.env.defs))
        new_conjs.append(_annotate_premise(conj, idx, F.Annotation("@", k),
                                           state.env.defs))
    for ih in ihs:
        seq.add_hyp(ih, base="IH")
    seq.goal = F.conj(new_conjs)
    state.replace_focused([seq])


def coinduction(state):
    seq = state.focused().copy()
    g = seq.goal

    def rebuild(g, ann):
        if isinstance(g, F.Quant) and g.kind in ("forall", "nabla"):
            return F.Quant(g.kind, g.hint, g.ty, rebuild(g.body, ann))
        if isinstance(g, F.Imp):
            return F.Imp(g.left, rebuild(g.right, ann))
        if isinstance(g, F.Atom):
            d = state.env.defs.get(g.pred)
            if d is None or d.flavor != "coinductive":
                raise NotCoinductive("coinduction needs a coinductively "
                                     "defined conclusion")
            return F.Atom(g.pred, g.args, ann)
        raise ProofError("coinduction conclusion must be an atom")

    k = _max_ann_level(g) + 1
    ch = rebuild(g, F.Annotation("+", k))
    seq.add_hyp(ch, base="CH")
    seq.goal = rebuild(g, F.Annotation("#", k))
    state.replace_focused([seq])


# ---------------------------------------------------------------------------
# lemma / hypothesis application

class MatchFail(Exception):
    pass


def _premise_ann_ok(p_ann, h_ann):
    if p_ann is not None:
        if h_ann != p_ann:
            raise AnnotationViolation(
                "hypothesis annotation %s does not satisfy the required %s"
                % (h_ann or "(none)", p_ann))
    else:
        if h_ann is not None and h_ann.kind in ("+", "#"):
            raise AnnotationViolation(
                "a coinduction hypothesis can only prove its own conclusion")


def _match_formula(prem, hyp, eqs, forbidden, seq):
    """Collect unification equations making prem equal to hyp; structural
    descent, opening matching quantifiers with shared fresh entities."""
    prem = F.normalize_formula(prem)
    hyp = F.normalize_formula(hyp)
    if isinstance(prem, F.Quant) and prem.kind == "nabla" \
            and not isinstance(hyp, F.Quant):
        # premise-side nabla: pick a nominal from the hypothesis (or fresh)
        sup = F.formula_support(hyp)
        extras = [fresh_nominal(prem.ty, set(seq.all_noms())
                                | {n.name for n in sup})]
        last = None
        for c in [n for n in sup if n.ty == prem.ty] + extras:
            sub_eqs = []
            try:
                _match_formula(F.open_quant(prem, c), hyp, sub_eqs,
                               forbidden, seq)
                eqs.extend(sub_eqs)
                return
            except MatchFail as e:
                last = e
        raise last or MatchFail("no nominal instantiation fits")
    if isinstance(prem, F.Atom) and isinstance(hyp, F.Atom):
        if prem.pred != hyp.pred or len(prem.args) != len(hyp.args):
            raise MatchFail("different predicates")
        _premise_ann_ok(prem.ann, hyp.ann)
        eqs.extend(zip(prem.args, hyp.args))
        return
    if isinstance(prem, F.NAbs) and isinstance(hyp, F.NAbs):
        if prem.degree != hyp.degree:
            raise MatchFail("different abstraction degrees")
        eqs.append((prem.lhs, hyp.lhs))
        eqs.append((prem.rhs, hyp.rhs))
        return
    if isinstance(prem, F.SpecAtom) and isinstance(hyp, F.SpecAtom):
        _premise_ann_ok(prem.ann, hyp.ann)
        eqs.append((prem.ctx, hyp.ctx))
        eqs.append((prem.goal, hyp.goal))
        return
    if isinstance(prem, F.Top) and isinstance(hyp, F.Top):
        return
    if isinstance(prem, F.Bot) and isinstance(hyp, F.Bot):
        return
    for cls in (F.And, F.Or, F.Imp):
        if isinstance(prem, cls) and isinstance(hyp, cls):
            _match_formula(prem.left, hyp.left, eqs, forbidden, seq)
            _match_formula(prem.right, hyp.right, eqs, forbidden, seq)
            return
    if isinstance(prem, F.Quant) and isinstance(hyp, F.Quant) \
            and prem.kind == hyp.kind:
        if prem.kind == "nabla":
            c = fresh_nominal(prem.ty, set(seq.all_noms()))
            forbidden.append(c)
            _match_formula(F.open_quant(prem, c), F.open_quant(hyp, c),
                           eqs, forbidden, seq)
            return
        v = Var(fresh_var_name("'m", set()), prem.ty)
        forbidden.append(v)
        _match_formula(F.open_quant(prem, v), F.open_quant(hyp, v),
                       eqs, forbidden, seq)
        return
    raise MatchFail("shapes do not match: %s vs %s"
                    % (type(prem).__name__, type(hyp).__name__))


def _strip_inductive_anns(f):
    def go(g):
        if isinstance(g, (F.Atom, F.SpecAtom)) and g.ann is not None \
                and g.ann.kind in ("*", "@"):
            return F.set_ann(g, None)
        if isinstance(g, F.And):
            return F.And(go(g.left), go(g.right))
        if isinstance(g, F.Or):
            return F.Or(go(g.left), go(g.right))
        if isinstance(g, F.Imp):
            return F.Imp(go(g.left), go(g.right))
        if isinstance(g, F.Quant):
            return F.Quant(g.kind, g.hint, g.ty, go(g.body))
        return g
    return go(f)


def apply_tactic(state, target, argnames, bindings=(), name_hint=None):
    seq = state.focused()
    env = state.env
    if any(n == target for n, _ in seq.hyps):
        f = seq.hyp(target)
    elif target in env.lemmas:
        f = env.lemmas[target]
    else:
        raise ProofError("unknown lemma or hypothesis %s" % target)
    f = F.normalize_formula(f)

    # fresh copies of the quantified variables; nabla slots are opened with
    # placeholder nominals whose instantiation is chosen below
    taken = set(seq.sig)
    lemvars = {}
    orig_names = {}
    slots = []
    while isinstance(f, F.Quant) and f.kind in ("forall", "nabla"):
        if f.kind == "nabla":
            c = fresh_nominal(f.ty, set(seq.all_noms())
                              | {s.name for s, _ in slots})
            slots.append((c, set(lemvars)))
            f = F.open_quant(f, c)
            continue
        fresh = fresh_var_name(f.hint or "X", taken | set(lemvars))
        v = Var(fresh, f.ty)
        lemvars[fresh] = f.ty
        orig_names[f.hint] = fresh
        f = F.open_quant(f, v)

    if slots:
        last = None
        noms = [Nom(n, ty) for n, ty in seq.all_noms().items()]
        pools = [[c for c in noms if c.ty == s.ty] + [s] for s, _ in slots]
        for choice in itertools.product(*pools):
            if len(set(choice)) != len(choice):
                continue
            ren = {s: c for (s, _), c in zip(slots, choice)}
            f2 = F.map_terms(f, lambda t, d: replace_noms(t, ren))
            info = [(c, before) for (s, before), c in zip(slots, choice)]
            try:
                _apply_opened(state, seq, env, target, f2, lemvars,
                              orig_names, info, argnames, bindings, name_hint)
                return
            except (ProofError, AnnotationViolation) as e:
                last = e
        raise last or ProofError("apply failed")
    _apply_opened(state, seq, env, target, f, lemvars, orig_names, [],
                  argnames, bindings, name_hint)


def replace_noms(t, ren):
    """Rename nominal constants in a term.  The targets must not already
    occur in the term; renaming by permutation leaves any de Bruijn indices
    bound outside the term untouched."""
    from .terms import permute
    return normalize(permute(Permutation(ren), t))


def _apply_opened(state, seq, env, target, f, lemvars, orig_names,
                  nabla_info, argnames, bindings, name_hint):
    prems = []
    while isinstance(f, F.Imp):
        prems.append(f.left)
        f = f.right
    concl = f
    if len(argnames) > len(prems):
        raise ProofError("%s expects %d arguments" % (target, len(prems)))
    argnames = list(argnames) + ["_"] * (len(prems) - len(argnames))

    eqs = []
    forbidden = []
    obligations = []
    for prem, arg in zip(prems, argnames):
        if arg == "_":
            obligations.append(prem)
            continue
        hyp = seq.hyp(arg)
        try:
            _match_formula(prem, hyp, eqs, forbidden, seq)
        except MatchFail as e:
            raise ProofError("cannot match %s against premise of %s: %s"
                             % (arg, target, e))
    for bname, bterm in bindings:
        if bname in orig_names:
            v = Var(orig_names[bname], lemvars[orig_names[bname]])
        elif bname in lemvars:
            v = Var(bname, lemvars[bname])
        else:
            raise ProofError("%s does not bind %s" % (target, bname))
        eqs.append((v, bterm))

    flex = set(lemvars) | set(seq.sig)
    try:
        theta = U.unify(eqs, flex, unrestricted=set(lemvars))
    except U.UnifyFailure as e:
        raise ProofError("apply failed: %s" % e)
    except U.NonPattern as e:
        raise ProofError("apply falls outside the pattern fragment: %s" % e)

    # fresh entities used to open matching quantifiers must not leak
    for t in theta.mapping.values():
        bad = set(support(t)) | set(free_vars(t))
        for x in forbidden:
            if x in bad:
                raise ProofError("apply would let a bound name escape")

    # universals quantified before a nabla must stay fresh for its nominal
    for c, before in nabla_info:
        for lv in before:
            if lv in theta.domain() and c in support(theta.mapping[lv]):
                raise ProofError(
                    "apply would move %s under a universal quantified "
                    "outside its nabla" % c.name)

    newvars = {}
    for t in theta.mapping.values():
        for v in free_vars(t):
            if v.name not in seq.sig and v.name not in lemvars:
                newvars[v.name] = v.ty
    newvars = _surviving_vars(theta, lemvars, newvars)
    full, newvars = prettify_solution(theta, newvars, seq)
    seq_theta = full.restrict(set(seq.sig))
    s2 = apply_solution(seq, seq_theta, newvars)

    outs = []
    for ob in obligations:
        obf = _strip_inductive_anns(F.apply_subst(full, ob))
        if F.formula_vars(obf) and any(
                v.name in lemvars and v.name not in theta.domain() and
                v.name not in newvars for v in F.formula_vars(obf)):
            raise ProofError("cannot determine an instantiation for an "
                             "unproved premise of %s" % target)
        s3 = s2.copy()
        s3.goal = obf
        if not search_closes(state.env, s3, state.env.settings.search_depth):
            outs.append(s3)
    newf = F.apply_subst(full, concl)
    newf = _strip_inductive_anns(newf)
    for part in _open_conclusion(s2, F.normalize_formula(newf)):
        s2.add_hyp(part, base=name_hint if name_hint else "H")
    outs.append(s2)
    state.replace_focused(outs)


def _open_conclusion(seq, f):
    """Split a derived conclusion into hypotheses, opening existential
    quantifiers with fresh eigenvariables raised over the support."""
    f = F.normalize_formula(f)
    if isinstance(f, F.Top):
        return []
    if isinstance(f, F.And):
        return _open_conclusion(seq, f.left) + _open_conclusion(seq, f.right)
    if isinstance(f, F.Quant) and f.kind == "exists":
        sup = F.formula_support(f)
        hint = f.hint.upper() if f.hint else "X"
        v = seq.fresh_var(hint, arrow([c.ty for c in sup], f.ty))
        return _open_conclusion(seq, F.open_quant(f, app(v, sup)))
    return [f]


# ---------------------------------------------------------------------------
# proof search

def _meta_after(meta, theta, seq):
    out = {k: v for k, v in meta.items() if k not in theta.domain()}
    for t in theta.mapping.values():
        for v in free_vars(t):
            if v.name not in seq.sig and v.name not in out:
                out[v.name] = v.ty
    return out


def _co_anns(f):
    return [a for a in F.collect_anns(f) if a.kind in ("+", "#")]


def _closure_ok(hyp, goal):
    """May this hypothesis close this goal, as far as annotations go?"""
    if any(a.kind == "#" for a in F.collect_anns(hyp)):
        return False
    return _co_anns(hyp) == _co_anns(goal)


def _intro_all(env, seq, goal):
    """A copy of the sequent with the goal's prefix introduced."""
    s2 = seq.copy()
    s2.goal = goal
    st = ProofState.__new__(ProofState)
    st.env = env
    st.subgoals = [s2]
    intros(st)
    return st.subgoals[0]


def _solve(env, seq, goal, depth, meta):
    """Yield substitutions over the metavariables that close the goal."""
    goal = F.normalize_formula(goal)

    for _, h in seq.hyps:
        if isinstance(h, F.Bot):
            yield Subst()
            return

    if isinstance(goal, F.Top):
        yield Subst()
        return
    if isinstance(goal, F.Bot):
        return

    # closure against a hypothesis
    for _, h in seq.hyps:
        if not _closure_ok(h, goal):
            continue
        if meta and isinstance(h, F.Atom) and isinstance(goal, F.Atom) \
                and h.pred == goal.pred and len(h.args) == len(goal.args):
            try:
                yield U.unify(list(zip(goal.args, h.args)), set(meta),
                              set(meta))
                continue
            except (U.UnifyFailure, U.NonPattern):
                pass
        if meta and isinstance(h, F.SpecAtom) and isinstance(goal, F.SpecAtom):
            try:
                yield U.unify([(goal.ctx, h.ctx), (goal.goal, h.goal)],
                              set(meta), set(meta))
                continue
            except (U.UnifyFailure, U.NonPattern):
                pass
        if meta and isinstance(h, F.NAbs) and isinstance(goal, F.NAbs) \
                and h.degree == goal.degree:
            try:
                yield U.unify([(goal.lhs, h.lhs), (goal.rhs, h.rhs)],
                              set(meta), set(meta))
                continue
            except (U.UnifyFailure, U.NonPattern):
                pass
        if not meta and F.formula_perm_equiv(h, goal):
            yield Subst()

    if isinstance(goal, F.And):
        for t1 in _solve(env, seq, goal.left, depth, meta):
            g2 = F.apply_subst(t1, goal.right)
            for t2 in _solve(env, seq, g2, depth,
                             _meta_after(meta, t1, seq)):
                yield compose_ordinary(t1, t2).restrict(set(meta))
        return
    if isinstance(goal, F.Or):
        for t in _solve(env, seq, goal.left, depth, meta):
            yield t
        for t in _solve(env, seq, goal.right, depth, meta):
            yield t
        return
    if isinstance(goal, F.Quant) and goal.kind == "exists":
        sup = F.formula_support(goal)
        v = U.fresh_var((goal.hint or "X").upper(),
                        arrow([n.ty for n in sup], goal.ty))
        meta2 = dict(meta)
        meta2[v.name] = v.ty
        body = F.open_quant(goal, app(v, sup))
        for t in _solve(env, seq, body, depth, meta2):
            yield t.restrict(set(meta))
        return
    if isinstance(goal, (F.Imp, F.Quant)):
        if meta:
            return
        s2 = _intro_all(env, seq, goal)
        for t in _solve(env, s2, s2.goal, depth, {}):
            yield t
        return
    if isinstance(goal, F.NAbs):
        if goal.degree == 0:
            try:
                yield U.unify([(goal.lhs, goal.rhs)], set(meta), set(meta))
            except (U.UnifyFailure, U.NonPattern):
                pass
            return
        if not meta and nabs.na_holds(goal.lhs, goal.rhs, goal.degree):
            yield Subst()
        return
    if isinstance(goal, F.Atom):
        for t in _solve_atom(env, seq, goal, depth, meta):
            yield t
        return
    if isinstance(goal, F.SpecAtom):
        for t in _solve_spec(env, seq, goal, depth, meta):
            yield t
        return


def _solve_atom(env, seq, goal, depth, meta):
    if goal.ann is not None and goal.ann.kind == "+":
        return          # only closable against the coinduction hypothesis
    d = env.defs.get(goal.pred)
    if d is None or depth <= 0:
        return
    child = None
    if goal.ann is not None and goal.ann.kind == "#":
        child = F.Annotation("+", goal.ann.level)
    for c in d.clauses:
        for theta, body, univ in _match_clause_against(
                seq, c, goal.args, d, extra_flex=meta):
            body = _mark_pred(F.apply_subst(theta, body), goal.pred, child)
            meta2 = _meta_after(dict(meta, **univ), theta, seq)
            for t2 in _solve(env, seq, body, depth - 1, meta2):
                from .terms import compose_ordinary
                full = compose_ordinary(theta, t2)
                yield full.restrict(set(meta))


def _solve_spec(env, seq, goal, depth, meta):
    if goal.ann is not None and goal.ann.kind == "+":
        return
    head, args = spine(normalize(goal.goal))
    if head == speclang.TT:
        yield Subst()
        return
    if head == speclang.CONJ and len(args) == 2:
        g1 = F.SpecAtom(goal.ctx, args[0], None)
        g2 = F.SpecAtom(goal.ctx, args[1], None)
        for t in _solve(env, seq, F.And(g1, g2), depth, meta):
            yield t
        return
    if head == speclang.DISJ and len(args) == 2:
        for t in _solve(env, seq,
                        F.Or(F.SpecAtom(goal.ctx, args[0], None),
                             F.SpecAtom(goal.ctx, args[1], None)),
                        depth, meta):
            yield t
        return
    if head == speclang.IMPL and len(args) == 2:
        for t in _solve(env, seq,
                        F.SpecAtom(speclang.CONS(args[0], goal.ctx),
                                   args[1], None), depth, meta):
            yield t
        return
    if isinstance(head, Const) and head.name == "pi" and len(args) == 1:
        if meta:
            return
        c = seq.fresh_nom(head.ty.left.left)
        for t in _solve(env, seq,
                        F.SpecAtom(goal.ctx, normalize(App(args[0], c)),
                                   None), depth, meta):
            yield t
        return
    if isinstance(head, Const) and head.name == "sigma" and len(args) == 1:
        sup = F.formula_support(goal)
        v = U.fresh_var("X", arrow([n.ty for n in sup], head.ty.left.left))
        meta2 = dict(meta)
        meta2[v.name] = v.ty
        inner = F.SpecAtom(goal.ctx, normalize(App(args[0], app(v, sup))),
                           None)
        for t in _solve(env, seq, inner, depth, meta2):
            yield t.restrict(set(meta))
        return
    if head == speclang.INJ and len(args) == 1:
        a = args[0]
        if depth <= 0:
            return
        # from the context, via the membership predicate
        if "member" in env.defs.defs and normalize(goal.ctx) != speclang.NIL:
            for t in _solve(env, seq, F.Atom("member", (a, goal.ctx), None),
                            depth - 1, meta):
                yield t
        # or by backchaining on a program clause
        for cl in (env.prog.clauses if env.prog else []):
            univ, head_t, goals = cl.fresh(set(seq.sig) | set(meta))
            flex = set(meta) | set(univ)
            try:
                theta = U.unify([(head_t, a)], flex, flex)
            except (U.UnifyFailure, U.NonPattern):
                continue
            meta2 = _meta_after(dict(meta, **univ), theta, seq)
            sub = F.conj([F.SpecAtom(
                normalize(apply_ordinary(theta, goal.ctx)),
                normalize(apply_ordinary(theta, gt)), None)
                for gt in goals]) if goals else F.Top()
            for t2 in _solve(env, seq, sub, depth - 1, meta2):
                from .terms import compose_ordinary
                yield compose_ordinary(theta, t2).restrict(set(meta))
        return


def search_closes(env, seq, depth):
    for _ in _solve(env, seq, seq.goal, depth, {}):
        return True
    return False


def search(state, depth=None):
    if depth is None:
        depth = state.env.settings.search_depth
    seq = state.focused()
    if search_closes(state.env, seq, depth):
        state.replace_focused([])
    else:
        raise ProofError("search found no proof")


# ---------------------------------------------------------------------------
# the small structural tactics

def split(state):
    seq = state.focused()
    conjs = F.conjuncts(seq.goal)
    if len(conjs) < 2:
        raise ProofError("split expects a conjunctive goal")
    outs = []
    for c in conjs:
        s2 = seq.copy()
        s2.goal = c
        outs.append(s2)
    state.replace_focused(outs)


def left(state):
    seq = state.focused()
    if not isinstance(seq.goal, F.Or):
        raise ProofError("left expects a disjunctive goal")
    s2 = seq.copy()
    s2.goal = seq.goal.left
    state.replace_focused([s2])


def right(state):
    seq = state.focused()
    if not isinstance(seq.goal, F.Or):
        raise ProofError("right expects a disjunctive goal")
    s2 = seq.copy()
    s2.goal = seq.goal.right
    state.replace_focused([s2])


def exists_tac(state, witnesses):
    seq = state.focused()
    s2 = seq.copy()
    for t in witnesses:
        g = F.normalize_formula(s2.goal)
        if not (isinstance(g, F.Quant) and g.kind == "exists"):
            raise ProofError("exists expects an existential goal")
        s2.goal = F.open_quant(g, normalize(t))
    state.replace_focused([s2])


def assert_tac(state, f, name_hint=None):
    seq = state.focused()
    proof = seq.copy()
    proof.goal = f
    rest = seq.copy()
    rest.add_hyp(f, base=name_hint if name_hint else "H")
    if search_closes(state.env, proof, state.env.settings.search_depth):
        state.replace_focused([rest])
    else:
        state.replace_focused([proof, rest])


def inst(state, hypname, pairs):
    seq = state.focused()
    f = F.normalize_formula(seq.hyp(hypname))
    if isinstance(f, F.SpecAtom):
        _spec_inst(state, seq, f, pairs)
        return
    for bname, t in pairs:
        if not (isinstance(f, F.Quant) and f.kind == "forall"):
            raise ProofError("inst expects a universal hypothesis")
        # instantiate outer binders positionally until the named one
        while isinstance(f, F.Quant) and f.kind == "forall" \
                and f.hint != bname:
            raise ProofError("the outermost binder of %s is %s, not %s"
                             % (hypname, f.hint, bname))
        f = F.inst(f.body, normalize(t))
        f = F.normalize_formula(f)
    s2 = seq.copy()
    s2.add_hyp(f)
    state.replace_focused([s2])


def _spec_inst(state, seq, f, pairs):
    """Instantiate nominal constants of a spec judgment with terms."""
    for nomname, t in pairs:
        target = None
        for n in F.formula_support(f):
            if n.name == nomname:
                target = n
        if target is None:
            raise ProofError("%s does not appear in the judgment" % nomname)
        t = normalize(t)
        if typecheck(t) != target.ty:
            raise ProofError("type mismatch instantiating %s" % nomname)

        def repl(term, d):
            def go(u):
                if u == target:
                    return t
                if isinstance(u, App):
                    return App(go(u.fn), go(u.arg))
                if isinstance(u, Lam):
                    return Lam(u.argty, go(u.body))
                return u
            return normalize(go(term))
        f = F.map_terms(f, repl)
    s2 = seq.copy()
    s2.add_hyp(F.normalize_formula(f))
    state.replace_focused([s2])


def spec_cut(state, h1name, h2name):
    seq = state.focused()
    h1 = F.normalize_formula(seq.hyp(h1name))
    h2 = F.normalize_formula(seq.hyp(h2name))
    if not isinstance(h1, F.SpecAtom) or not isinstance(h2, F.SpecAtom):
        raise ProofError("cut expects two spec judgments")
    hd, hargs = spine(normalize(h2.goal))
    if hd != speclang.INJ or len(hargs) != 1:
        raise ProofError("the cut lemma must prove an atomic judgment")
    cut_atom = normalize(hargs[0])
    items, tail = speclang.list_parts(normalize(h1.ctx))
    for i, a in enumerate(items):
        if normalize(a) != cut_atom:
            continue
        rest = speclang.cons_list(items[:i] + items[i + 1:], tail)
        if normalize(rest) != normalize(h2.ctx):
            continue
        s2 = seq.copy()
        s2.add_hyp(F.SpecAtom(normalize(rest), h1.goal, h1.ann))
        state.replace_focused([s2])
        return
    raise ProofError("cut: the second judgment does not prove a context "
                     "element of the first in the remaining context")


def spec_monotone(state, hypname, newctx):
    seq = state.focused()
    h = F.normalize_formula(seq.hyp(hypname))
    if not isinstance(h, F.SpecAtom):
        raise ProofError("monotone expects a spec judgment")
    newctx = normalize(newctx)
    e = Var("'e", speclang.ATM)
    ob = F.Quant("forall", "E", speclang.ATM,
                 F.Imp(F.Atom("member", (Bound(0), h.ctx), None),
                       F.Atom("member", (Bound(0), newctx), None)))
    s2 = seq.copy()
    s2.add_hyp(F.SpecAtom(newctx, h.goal, h.ann))
    proof = seq.copy()
    proof.goal = ob
    if search_closes(state.env, proof, state.env.settings.search_depth):
        state.replace_focused([s2])
    else:
        state.replace_focused([proof, s2])


# ---------------------------------------------------------------------------
# explicit fixed point rules

def _inv_instance(binders, inv, args):
    if len(binders) != len(args):
        raise ProofError("the invariant takes %d arguments" % len(args))
    theta = Subst({b: normalize(a) for b, a in zip(binders, args)})
    return F.normalize_formula(F.apply_subst(theta, inv))


def _replace_pred(f, pred, fn):
    if isinstance(f, F.Atom) and f.pred == pred:
        return fn(list(f.args))
    if isinstance(f, F.And):
        return F.And(_replace_pred(f.left, pred, fn),
                     _replace_pred(f.right, pred, fn))
    if isinstance(f, F.Or):
        return F.Or(_replace_pred(f.left, pred, fn),
                    _replace_pred(f.right, pred, fn))
    if isinstance(f, F.Imp):
        return F.Imp(_replace_pred(f.left, pred, fn),
                     _replace_pred(f.right, pred, fn))
    if isinstance(f, F.Quant):
        return F.Quant(f.kind, f.hint, f.ty, _replace_pred(f.body, pred, fn))
    return f


def _fixpoint_parts(env, pred, binders, inv):
    d = env.defs.get(pred)
    if d is None:
        raise ProofError("%s is not a defined predicate" % pred)
    if F.formula_support(inv):
        raise NominalInInvariant(
            "the invariant may not mention nominal constants")
    ys, body = translate_pattern_def(d)
    body_s = _replace_pred(body, pred, lambda args:
                           _inv_instance(binders, inv, args))
    return d, ys, body_s


def il_tactic(state, hypname, binders, inv):
    """Replace an atom of a least fixed point by an invariant that is
    preserved by the definition's body."""
    seq = state.focused()
    f = F.normalize_formula(seq.hyp(hypname))
    if not isinstance(f, F.Atom):
        raise ProofError("the hypothesis must be an atom of a defined "
                         "predicate")
    d, ys, body_s = _fixpoint_parts(state.env, f.pred, binders, inv)
    if d.flavor == "coinductive":
        raise NotInductive("%s is a greatest fixed point" % f.pred)
    base = Sequent(_inv_instance(binders, inv, ys),
                   sig={y.name: y.ty for y in ys})
    pres = []
    for alt in _decompose(base, F.normalize_formula(body_s), lambda x: x):
        s = base.copy()
        for h in alt:
            s.add_hyp(h)
        pres.append(s)
    main = seq.copy()
    main.set_hyp(hypname, _inv_instance(binders, inv, list(f.args)))
    state.replace_focused(pres + [main])


def cir_tactic(state, binders, inv):
    """Prove a greatest fixed point goal from an invariant that the
    definition's body reproduces."""
    seq = state.focused()
    g = F.normalize_formula(seq.goal)
    if not isinstance(g, F.Atom):
        raise ProofError("the goal must be an atom of a defined predicate")
    d, ys, body_s = _fixpoint_parts(state.env, g.pred, binders, inv)
    if d.flavor != "coinductive":
        raise NotCoinductive("%s is not a greatest fixed point" % g.pred)
    start = seq.copy()
    start.goal = _inv_instance(binders, inv, list(g.args))
    pres = Sequent(F.normalize_formula(body_s),
                   sig={y.name: y.ty for y in ys})
    pres.add_hyp(_inv_instance(binders, inv, ys))
    state.replace_focused([start, pres])


def permute_hyp(state, hypname, names):
    """Apply a cyclic permutation of nominal constants to one hypothesis."""
    seq = state.focused()
    f = seq.hyp(hypname)
    noms = dict(seq.all_noms())
    cycle = []
    for n in names:
        if n not in noms:
            raise ProofError("unknown nominal constant %s" % n)
        cycle.append(Nom(n, noms[n]))
    mapping = {}
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        if a.ty != b.ty:
            raise ProofError("permutation must preserve types")
        mapping[a] = b
    from .terms import Permutation as P
    s2 = seq.copy()
    s2.add_hyp(F.permute_formula(P(mapping), f))
    state.replace_focused([s2])
