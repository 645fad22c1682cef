"""Top-level command interpreter: declarations, definitions, theorem
statements, tactic dispatch, undo and the lemma store."""

import os

from . import engine as E
from . import formulas as F
from . import spec as SP
from . import syntax
from .definitions import DefError, DefTable, Definition
from .syntax import ParseError, Parser, SymTable
from .terms import normalize


class CommandError(Exception):
    pass


TACTICS = {"induction", "coinduction", "intros", "case", "apply", "unfold",
           "search", "split", "left", "right", "exists", "assert", "inst",
           "cut", "monotone", "permute", "il", "cir"}

TOP_COMMANDS = {"Kind", "Type", "Specification", "Define", "CoDefine",
                "Theorem", "Set", "Undo", "Import", "Quit"}


def split_statements(text):
    """Token lists for the '.'-terminated statements of a file or line."""
    toks = syntax.tokenize(text)
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
        raise ParseError("unterminated statement (missing '.')")
    return out


def _parser(toks, symtab, var_types=None, nom_types=None):
    p = Parser.__new__(Parser)
    p.toks = list(toks)
    p.pos = 0
    p.symtab = symtab
    p.ty_subst = {}
    p.var_types = dict(var_types or {})
    p.free_order = []
    p.nom_types = dict(nom_types or {})
    return p


class Session:
    def __init__(self, base_dir=".", settings=None):
        self.symtab = SymTable()
        self.defs = DefTable()
        self.lemmas = {}
        self.prog = None
        self.settings = settings if settings is not None else E.Settings()
        self.base_dir = base_dir
        self.proof = None            # ProofState while a proof is open
        self.proof_name = None
        self.proof_goal = None
        self.history = []
        self.theorems_proved = []

    # -- snapshots for undo

    def _snapshot(self):
        return (self.symtab.clone(), self.defs.clone(), dict(self.lemmas),
                self.prog, self.settings.copy(),
                self.proof.copy() if self.proof else None,
                self.proof_name, self.proof_goal,
                list(self.theorems_proved))

    def _restore(self, snap):
        (self.symtab, self.defs, self.lemmas, self.prog, self.settings,
         self.proof, self.proof_name, self.proof_goal,
         self.theorems_proved) = snap

    def env(self):
        return E.Env(defs=self.defs, lemmas=self.lemmas, prog=self.prog,
                     settings=self.settings, symtab=self.symtab)

    # -- execution

    def execute(self, text):
        """Run every statement in the text; returns the messages emitted."""
        out = []
        for toks in split_statements(text):
            out.extend(self.execute_statement(toks))
        return out

    def execute_statement(self, toks):
        if not toks:
            return []
        k, v = toks[0]
        if k == "name" and v == "Undo":
            if not self.history:
                return ["Nothing to undo."]
            self._restore(self.history.pop())
            return ["Undone."]
        snap = self._snapshot()
        try:
            if k == "name" and v in TOP_COMMANDS:
                msgs = self._command(v, toks)
            elif k == "name" and (v in TACTICS or v == "abort"):
                msgs = self._tactic(v, toks)
            else:
                raise CommandError("unknown command %r" % (v,))
        except (CommandError, ParseError, DefError, E.ProofError,
                SP.SpecError) as e:
            raise CommandError(str(e)) from e
        self.history.append(snap)
        return msgs

    # -- top-level commands

    def _command(self, name, toks):
        if self.proof is not None and name not in ("Set", "Quit"):
            raise CommandError(
                "finish or abort the current proof before using %s" % name)
        p = _parser(toks, self.symtab)
        p.next()
        if name == "Kind":
            names = [p.expect("name")]
            while p.eat_punct(","):
                names.append(p.expect("name"))
            p.expect("name", "type")
            self._done(p)
            for n in names:
                self.symtab.declare_kind(n)
            return []
        if name == "Type":
            names = [p.expect("name")]
            while p.eat_punct(","):
                names.append(p.expect("name"))
            ty = p.parse_ty()
            self._done(p)
            for n in names:
                self.symtab.declare_const(n, ty)
            return []
        if name == "Specification":
            path = p.expect("str")
            self._done(p)
            return self._load_spec(path)
        if name in ("Define", "CoDefine"):
            return self._define(name, toks)
        if name == "Theorem":
            thm = p.expect("name")
            p.expect("punct", ":")
            f = p.parse_formula()
            self._done(p)
            f = F.normalize_formula(p.zonk_formula(f, "theorem"))
            if p.free_order:
                raise CommandError("theorem statement has free variables: %s"
                                   % ", ".join(p.free_order))
            self.proof = E.ProofState(f, self.env())
            self.proof_name = thm
            self.proof_goal = f
            return ["Proving %s." % thm]
        if name == "Set":
            key = p.expect("name")
            kk, vv = p.next()
            self._done(p)
            return self._set(key, vv)
        if name == "Import":
            path = p.expect("str")
            self._done(p)
            return self._import(path)
        if name == "Quit":
            self._done(p)
            raise SystemExit(0)
        raise CommandError("unknown command %s" % name)

    def _done(self, p):
        if not p.done():
            raise ParseError("trailing input: %r" % (p.peek()[1],))

    def _set(self, key, value):
        if key == "search_depth":
            self.settings.search_depth = int(value)
        elif key == "unstratified":
            self.settings.unstratified = value == "on"
        elif key == "nabla_types":
            self.settings.nabla_types = None if value == "all" \
                else set(str(value).split())
        else:
            raise CommandError("unknown setting %s" % key)
        return []

    def _load_spec(self, path):
        full = os.path.join(self.base_dir, path)
        if not os.path.exists(full) and os.path.exists(full + ".sig"):
            full = full + ".sig"
        if not os.path.exists(full):
            raise CommandError("specification file not found: %s" % full)
        with open(full) as fh:
            text = fh.read()
        SP.declare_spec_symbols(self.symtab)
        self.prog = SP.parse_spec(text, self.symtab)
        SP.install_seq_defs(self.defs, self.symtab, self.prog)
        return ["Specification %s loaded (%d clauses)."
                % (path, len(self.prog.clauses))]

    def _define(self, name, toks):
        flavor = "inductive" if name == "Define" else "coinductive"
        p = _parser(toks, self.symtab)
        p.next()
        sigs = []
        while True:
            pred = p.expect("name")
            p.expect("punct", ":")
            ty = p.parse_ty()
            sigs.append((pred, ty))
            if not p.eat_punct(","):
                break
        p.expect("name", "by")
        # declare the predicates, then parse the ';'-separated clauses
        for pred, ty in sigs:
            self.symtab.declare_const(pred, ty)
        groups = []
        cur = []
        depth = 0
        for t in p.toks[p.pos:]:
            if t[0] == "punct" and t[1] in ("(", "{"):
                depth += 1
            elif t[0] == "punct" and t[1] in (")", "}"):
                depth -= 1
            if t == ("punct", ";") and depth == 0:
                groups.append(cur)
                cur = []
            else:
                cur.append(t)
        groups.append(cur)
        by_pred = {pred: [] for pred, _ in sigs}
        for g in groups:
            text = _untokenize(g)
            c, pred = SP.parse_def_clause(text, self.symtab)
            if pred not in by_pred:
                raise CommandError("clause for %s outside its block" % pred)
            by_pred[pred].append(c)
        block = [Definition(pred, ty, flavor, by_pred[pred])
                 for pred, ty in sigs]
        try:
            self.defs.add_block(block, self.settings.unstratified)
        except DefError:
            # roll back the constant declarations
            for pred, _ in sigs:
                self.symtab.consts.pop(pred, None)
            raise
        return []

    def _import(self, path):
        full = os.path.join(self.base_dir, path)
        if not os.path.exists(full) and os.path.exists(full + ".thm"):
            full = full + ".thm"
        if not os.path.exists(full):
            raise CommandError("import not found: %s" % full)
        with open(full) as fh:
            text = fh.read()
        sub = Session(base_dir=os.path.dirname(full) or ".",
                      settings=self.settings.copy())
        sub.execute(text)
        if sub.proof is not None:
            raise CommandError("imported file leaves an open proof")
        self.symtab = sub.symtab
        self.defs = sub.defs
        self.prog = sub.prog
        self.lemmas.update(sub.lemmas)
        return ["Imported %s (%d theorems)."
                % (path, len(sub.theorems_proved))]

    # -- tactics

    def _tactic(self, name, toks):
        if self.proof is None:
            raise CommandError("no proof in progress")
        if name == "abort":
            self.proof = None
            self.proof_name = None
            self.proof_goal = None
            return ["Proof aborted."]
        seq = self.proof.focused() if not self.proof.done else None
        var_types = dict(seq.sig) if seq else {}
        nom_types = dict(seq.all_noms()) if seq else {}
        p = _parser(toks, self.symtab, var_types, nom_types)
        p.next()
        st = self.proof
        if name == "induction":
            p.expect("name", "on")
            idxs = [int(p.expect("num"))]
            while p.peek()[0] == "num":
                idxs.append(int(p.next()[1]))
            self._done(p)
            E.induction(st, idxs)
        elif name == "coinduction":
            self._done(p)
            E.coinduction(st)
        elif name == "intros":
            self._done(p)
            E.intros(st)
        elif name == "case":
            h = p.expect("name")
            keep = False
            if p.eat_punct("("):
                p.expect("name", "keep")
                p.expect("punct", ")")
                keep = True
            self._done(p)
            E.case(st, h, keep=keep)
        elif name == "apply":
            target = p.expect("name")
            args = []
            if p.peek() == ("name", "to"):
                p.next()
                while (p.peek()[0] == "name" and p.peek()[1] != "with") \
                        or p.at_punct("_"):
                    args.append(p.next()[1])
            bindings = self._bindings(p)
            self._done(p)
            E.apply_tactic(st, target, args, bindings)
        elif name == "unfold":
            n = None
            if p.peek()[0] == "num":
                n = int(p.next()[1])
            self._done(p)
            E.unfold(st, n)
        elif name == "search":
            depth = None
            if p.peek()[0] == "num":
                depth = int(p.next()[1])
            self._done(p)
            E.search(st, depth)
        elif name == "split":
            self._done(p)
            E.split(st)
        elif name == "left":
            self._done(p)
            E.left(st)
        elif name == "right":
            self._done(p)
            E.right(st)
        elif name == "exists":
            ts = [self._zterm(p, p.parse_term([]))]
            while p.eat_punct(","):
                ts.append(self._zterm(p, p.parse_term([])))
            self._done(p)
            E.exists_tac(st, ts)
        elif name == "assert":
            f = p.parse_formula()
            self._done(p)
            f = F.normalize_formula(p.zonk_formula(f, "assertion"))
            E.assert_tac(st, f)
        elif name == "inst":
            h = p.expect("name")
            p.expect("name", "with")
            pairs = self._term_bindings(p)
            self._done(p)
            E.inst(st, h, pairs)
        elif name == "cut":
            h1 = p.expect("name")
            p.expect("name", "with")
            h2 = p.expect("name")
            self._done(p)
            E.spec_cut(st, h1, h2)
        elif name == "monotone":
            h = p.expect("name")
            p.expect("name", "with")
            t = self._zterm(p, p.parse_term([]))
            self._done(p)
            E.spec_monotone(st, h, t)
        elif name == "permute":
            h = p.expect("name")
            p.expect("punct", "(")
            names = []
            while p.peek()[0] == "name":
                names.append(p.next()[1])
            p.expect("punct", ")")
            self._done(p)
            E.permute_hyp(st, h, names)
        elif name == "il":
            h = p.expect("name")
            p.expect("name", "with")
            binders, inv = self._invariant(p)
            self._done(p)
            E.il_tactic(st, h, binders, inv)
        elif name == "cir":
            p.expect("name", "with")
            binders, inv = self._invariant(p)
            self._done(p)
            E.cir_tactic(st, binders, inv)
        else:
            raise CommandError("unknown tactic %s" % name)
        if st.done:
            self.lemmas[self.proof_name] = self.proof_goal
            self.theorems_proved.append(self.proof_name)
            self.proof = None
            name_ = self.proof_name
            self.proof_name = None
            self.proof_goal = None
            return ["Proof of %s completed." % name_]
        return []

    def _zterm(self, p, pair):
        t, _ = pair
        return normalize(p.zonk_term(t, "tactic argument"))

    def _bindings(self, p):
        out = []
        if p.peek() == ("name", "with"):
            p.next()
            out = self._term_bindings(p)
        return out

    def _term_bindings(self, p):
        out = []
        while True:
            n = p.expect("name")
            p.expect("punct", "=")
            t = self._zterm(p, p.parse_term([]))
            out.append((n, t))
            if not p.eat_punct(","):
                break
        return out

    def _invariant(self, p):
        """An invariant: optional binder names, a backslash, a formula."""
        binders = []
        save = p.pos
        names = []
        while p.peek()[0] == "name":
            names.append(p.next()[1])
        if names and p.eat_punct("\\"):
            binders = names
            env = []
            for n in binders:
                p.var_types.setdefault(n, syntax.TyVar())
        else:
            p.pos = save
        f = p.parse_formula()
        f = F.normalize_formula(p.zonk_formula(f, "invariant"))
        return binders, f


def _untokenize(toks):
    parts = []
    for k, v in toks:
        if k == "str":
            parts.append('"%s"' % v)
        else:
            parts.append(str(v))
    return " ".join(parts)


# ---------------------------------------------------------------------------
# rendering

def render_sequent(seq, index=None, total=None):
    lines = []
    if index is not None:
        lines.append("Subgoal %d of %d:" % (index, total))
    if seq.sig:
        lines.append("Variables: " + " ".join(sorted(seq.sig)))
    noms = seq.all_noms()
    if noms:
        lines.append("Nominals: " + " ".join(sorted(noms)))
    for n, f in seq.hyps:
        lines.append("%s : %s" % (n, syntax.print_formula(f)))
    lines.append("=" * 40)
    lines.append(syntax.print_formula(seq.goal))
    return "\n".join(lines)


def render_state(proof):
    if proof is None:
        return "No proof in progress."
    if proof.done:
        return "Proof completed."
    total = len(proof.subgoals)
    return render_sequent(proof.focused(), 1, total)


def sequent_json(seq):
    return {
        "sig": [{"name": n, "ty": syntax.print_ty(t)}
                for n, t in sorted(seq.sig.items())],
        "hyps": [{"name": n,
                  "formula": syntax.print_formula(f),
                  "ann": syntax.print_ann(F.get_ann(f))
                  if F.get_ann(f) else ""}
                 for n, f in seq.hyps],
        "goal": syntax.print_formula(seq.goal),
    }


def state_json(proof):
    if proof is None:
        return {"proof": False, "subgoals": []}
    return {"proof": True,
            "subgoals": [sequent_json(s) for s in proof.subgoals]}


# ---------------------------------------------------------------------------
# file checking

def check_file(path, settings=None, trace=False):
    """Run a theorem file; returns (ok, report lines)."""
    if not os.path.exists(path):
        return False, ["file not found: %s" % path]
    with open(path) as fh:
        text = fh.read()
    sess = Session(base_dir=os.path.dirname(path) or ".", settings=settings)
    report = []
    try:
        stmts = split_statements(text)
    except ParseError as e:
        return False, ["parse error: %s" % e]
    for i, toks in enumerate(stmts):
        try:
            msgs = sess.execute_statement(toks)
        except CommandError as e:
            loc = _untokenize(toks[:8])
            report.append("error at statement %d (%s ...): %s"
                          % (i + 1, loc, e))
            return False, report
        for m in msgs:
            report.append(m)
        if trace and sess.proof is not None:
            report.append(render_state(sess.proof))
    if sess.proof is not None:
        report.append("error: file ends with open subgoals in %s"
                      % sess.proof_name)
        return False, report
    report.append("%d theorem(s) proved." % len(sess.theorems_proved))
    return True, report
