"""Command line entry points: REPL, batch checker, query runner, the JSON
session server, and two debug subcommands for the unifier and the
abstraction solver.

Exit codes: 0 success, 1 proof/query failure, 2 usage or parse error.
"""

import argparse
import json
import os
import socketserver
import sys

from . import engine as E
from . import formulas as F
from . import nabs as NA
from . import session as S
from . import spec as SP
from . import syntax
from .syntax import ParseError
from .terms import free_vars, normalize
from . import unify as U


def canonical(obj):
    """One stable serialization, used by --json output and the server so
    that clients can compare payloads byte for byte."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def make_settings(args):
    s = E.Settings()
    envd = os.environ.get("NABELLA_DEPTH")
    if envd:
        try:
            s.search_depth = int(envd)
        except ValueError:
            pass
    if getattr(args, "depth", None) is not None:
        s.search_depth = args.depth
    return s


class Palette:
    def __init__(self, enabled):
        self.enabled = enabled

    def _wrap(self, code, text):
        if not self.enabled:
            return text
        return "\x1b[%sm%s\x1b[0m" % (code, text)

    def ok(self, text):
        return self._wrap("32", text)

    def fail(self, text):
        return self._wrap("31", text)


def _use_color(args):
    if getattr(args, "no_color", False):
        return False
    return sys.stdout.isatty()


# ---------------------------------------------------------------------------
# check

def cmd_check(args):
    settings = make_settings(args)
    pal = Palette(_use_color(args))
    results = []
    ok_all = True
    for path in args.files:
        ok, report = S.check_file(path, settings=settings.copy())
        results.append({"path": path, "ok": ok, "report": report})
        ok_all = ok_all and ok
    if args.json:
        print(canonical({"ok": ok_all, "files": results}))
    else:
        for r in results:
            for line in r["report"]:
                print(line)
            tag = pal.ok("PASS") if r["ok"] else pal.fail("FAIL")
            print("%s %s" % (tag, r["path"]))
    return 0 if ok_all else 1


# ---------------------------------------------------------------------------
# repl

def _state_payload(sess, msgs=None):
    payload = S.state_json(sess.proof)
    payload["status"] = "ok"
    if msgs:
        payload["message"] = "\n".join(msgs)
    return payload


def repl_step(sess, toks):
    """Execute one statement; returns the JSON payload for it."""
    try:
        msgs = sess.execute_statement(toks)
    except S.CommandError as e:
        payload = S.state_json(sess.proof)
        payload["status"] = "error"
        payload["error"] = str(e)
        return payload
    return _state_payload(sess, msgs)


def cmd_repl(args):
    settings = make_settings(args)
    sess = S.Session(base_dir=args.dir, settings=settings)
    interactive = sys.stdin.isatty() and not args.json
    buf = ""
    while True:
        if interactive:
            sys.stdout.write("nabella< " if buf else "nabella> ")
            sys.stdout.flush()
        line = sys.stdin.readline()
        if not line:
            break
        buf += line
        stripped = buf.strip()
        if not stripped or not stripped.endswith("."):
            continue
        try:
            stmts = S.split_statements(buf)
        except ParseError:
            continue
        buf = ""
        for toks in stmts:
            try:
                payload = repl_step(sess, toks)
            except SystemExit:
                return 0
            if args.json:
                print(canonical(payload))
            else:
                if payload["status"] == "error":
                    print("Error: %s" % payload["error"])
                else:
                    if payload.get("message"):
                        print(payload["message"])
                    print(S.render_state(sess.proof)
                          if sess.proof is not None else "")
    return 0


# ---------------------------------------------------------------------------
# query

def cmd_query(args):
    settings = make_settings(args)
    sess = S.Session(base_dir=args.dir, settings=settings)
    try:
        sess.execute('Specification "%s".' % args.spec)
    except S.CommandError as e:
        print("Error: %s" % e, file=sys.stderr)
        return 2
    found = 0
    try:
        depth = args.depth if args.depth is not None else 10
        for answer in SP.run_query(sess.prog, sess.symtab, args.goal,
                                   depth=depth,
                                   max_solutions=args.max_solutions):
            found += 1
            if not answer:
                print("Solution %d: yes" % found)
            else:
                parts = ["%s = %s" % (n, syntax.print_term(t))
                         for n, t in sorted(answer.items())]
                print("Solution %d: %s" % (found, ", ".join(parts)))
    except (ParseError, SP.SpecError) as e:
        print("Error: %s" % e, file=sys.stderr)
        return 2
    if found == 0:
        print("No solutions.")
        return 1
    return 0


# ---------------------------------------------------------------------------
# the session protocol

def handle_request(sess, raw):
    """One protocol round: a raw request line in, a response object out."""
    try:
        req = json.loads(raw)
    except ValueError as e:
        return {"status": "error", "kind": "protocol",
                "error": "bad JSON: %s" % e, "subgoals": []}
    rid = req.get("id")
    cmd = req.get("cmd")
    base = {"id": rid} if rid is not None else {}

    def respond(status, **kw):
        out = dict(base)
        out["status"] = status
        out["subgoals"] = S.state_json(sess.proof)["subgoals"]
        out.update(kw)
        return out

    try:
        if cmd == "load_spec":
            msgs = sess.execute('Specification "%s".' % req.get("text", ""))
        elif cmd in ("command", "tactic"):
            msgs = []
            for toks in S.split_statements(req.get("text", "")):
                msgs.extend(sess.execute_statement(toks))
        elif cmd == "undo":
            msgs = sess.execute("Undo.")
        elif cmd == "state":
            msgs = []
        else:
            out = dict(base)
            out.update({"status": "error", "kind": "unknown_command",
                        "error": "unknown cmd %r" % (cmd,),
                        "subgoals": S.state_json(sess.proof)["subgoals"]})
            return out
    except (S.CommandError, ParseError) as e:
        return respond("error", error=str(e))
    return respond("ok", **({"message": "\n".join(msgs)} if msgs else {}))


def serve_stream(infile, outfile, base_dir, settings):
    sess = S.Session(base_dir=base_dir, settings=settings)
    for raw in infile:
        line = raw.strip()
        if not line:
            continue
        resp = handle_request(sess, line)
        outfile.write(canonical(resp) + "\n")
        outfile.flush()


def cmd_serve(args):
    settings = make_settings(args)
    if args.stdio:
        serve_stream(sys.stdin, sys.stdout, args.dir, settings)
        return 0

    base_dir = args.dir

    class Handler(socketserver.StreamRequestHandler):
        def handle(self):
            sess = S.Session(base_dir=base_dir, settings=settings.copy())
            for raw in self.rfile:
                line = raw.decode("utf-8").strip()
                if not line:
                    continue
                resp = handle_request(sess, line)
                self.wfile.write((canonical(resp) + "\n").encode("utf-8"))

    class Server(socketserver.ThreadingTCPServer):
        allow_reuse_address = True
        daemon_threads = True

    with Server(("127.0.0.1", args.port), Handler) as srv:
        print("listening on port %d" % srv.server_address[1])
        sys.stdout.flush()
        try:
            srv.serve_forever()
        except KeyboardInterrupt:
            pass
    return 0


# ---------------------------------------------------------------------------
# debug subcommands

def _debug_symtab(args):
    st = syntax.SymTable()
    if getattr(args, "spec", None):
        SP.declare_spec_symbols(st)
        with open(args.spec) as fh:
            SP.parse_spec(fh.read(), st)
    for k in getattr(args, "kind", None) or []:
        if k not in st.kinds:
            st.declare_kind(k)
    if "i" not in st.kinds and not getattr(args, "spec", None):
        st.declare_kind("i")
    for decl in getattr(args, "type", None) or []:
        name, _, ty = decl.partition(":")
        st.declare_const(name.strip(), syntax.parse_ty(ty.strip(), st))
    return st


def _parse_term_pair(args, extra_arrows=0):
    """Parse the two term arguments with one shared parser, leaving any
    unresolved base types defaulted.  Returns (lhs, rhs) normalized."""
    st = _debug_symtab(args)
    p = syntax.Parser("(%s) , (%s)" % (args.left, args.right), st)
    if "i" in st.kinds:
        p.ty_default = syntax.Base("i")
    elif st.kinds:
        p.ty_default = syntax.Base(sorted(st.kinds)[0])
    lt, lty = p.parse_term([])
    p.expect("punct", ",")
    rt, rty = p.parse_term([])
    if not p.done():
        raise ParseError("trailing input after term")
    want = rty
    for _ in range(extra_arrows):
        want = syntax.Arrow(syntax.TyVar(), want)
    p.unify_ty(lty, want, "term pair")
    return (normalize(p.zonk_term(lt, "left term")),
            normalize(p.zonk_term(rt, "right term")))


def cmd_unify(args):
    try:
        lhs, rhs = _parse_term_pair(args)
    except ParseError as e:
        print("Error: %s" % e, file=sys.stderr)
        return 2
    flex = set(v.name for v in free_vars(lhs) + free_vars(rhs))
    out = U.unify_outcome([(lhs, rhs)], flex, unrestricted=flex)
    if isinstance(out, U.Solved):
        if not out.subst.mapping:
            print("Unifiable; identity substitution.")
        for name, t in sorted(out.subst.mapping.items()):
            print("%s = %s" % (name, syntax.print_term(t)))
        return 0
    if isinstance(out, U.OutsidePattern):
        print("Outside the pattern fragment: %s" % out.reason)
        return 1
    print("No unifier: %s" % out.reason)
    return 1


def cmd_nabs(args):
    try:
        lhs, rhs = _parse_term_pair(args, extra_arrows=args.degree)
    except ParseError as e:
        print("Error: %s" % e, file=sys.stderr)
        return 2
    sig = {v.name: v.ty for v in free_vars(lhs) + free_vars(rhs)}
    if not sig:
        holds = NA.na_holds(lhs, rhs, args.degree)
        print("Holds: %s" % ("yes" if holds else "no"))
        return 0 if holds else 1
    sols = NA.csnas(sig, lhs, rhs, args.degree)
    if not sols:
        print("No solutions.")
        return 1
    for i, (theta, _) in enumerate(sols):
        parts = ["%s = %s" % (n, syntax.print_term(t))
                 for n, t in sorted(theta.mapping.items())]
        print("Solution %d: %s" % (i + 1, ", ".join(parts) or "identity"))
    return 0


# ---------------------------------------------------------------------------
# argument parsing

def build_parser():
    ap = argparse.ArgumentParser(
        prog="nabella",
        description="An interactive theorem prover for a logic of "
                    "lambda-tree syntax with generic quantification.")
    sub = ap.add_subparsers(dest="mode", required=True)

    def common(p):
        p.add_argument("--depth", type=int, default=None,
                       help="search depth (default 5; NABELLA_DEPTH env)")
        p.add_argument("--no-color", action="store_true")
        p.add_argument("--dir", default=".",
                       help="base directory for specification files")

    p = sub.add_parser("check", help="run theorem files in batch")
    p.add_argument("files", nargs="+")
    p.add_argument("--json", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("repl", help="interactive proof session")
    p.add_argument("--json", action="store_true",
                   help="emit one JSON state line per statement")
    common(p)
    p.set_defaults(fn=cmd_repl)

    p = sub.add_parser("query", help="run a logic-programming query")
    p.add_argument("spec", help="specification file")
    p.add_argument("goal", help="goal to solve")
    p.add_argument("--max-solutions", type=int, default=None)
    common(p)
    p.set_defaults(fn=cmd_query)

    p = sub.add_parser("serve", help="JSON session server")
    p.add_argument("--port", type=int, default=4041)
    p.add_argument("--stdio", action="store_true",
                   help="speak the protocol over stdin/stdout")
    common(p)
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("unify", help="debug: unify two terms")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--spec", default=None,
                   help="specification file supplying the signature")
    p.add_argument("--kind", action="append", help="declare a base type")
    p.add_argument("--type", action="append", metavar="NAME:TY",
                   help="declare a constant")
    p.set_defaults(fn=cmd_unify)

    p = sub.add_parser("nabs", help="debug: solve an abstraction statement")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("degree", type=int)
    p.add_argument("--spec", default=None)
    p.add_argument("--kind", action="append")
    p.add_argument("--type", action="append", metavar="NAME:TY")
    p.set_defaults(fn=cmd_nabs)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
