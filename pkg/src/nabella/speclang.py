"""Shared constants for the embedded specification logic encoding.

Spec-level goal formulas are ordinary terms of type frm built from the
constructors below; atoms are terms of type atm.  Contexts are atm lists.
"""

from .terms import Base, Arrow, Const

NT = Base("nt")
ATM = Base("o")
ATMLIST = Base("olist")
FRM = Base("frm")

ZERO = Const("z", NT)
SUCC = Const("s", Arrow(NT, NT))

NIL = Const("nil", ATMLIST)
CONS = Const("::", Arrow(ATM, Arrow(ATMLIST, ATMLIST)))

TT = Const("tt", FRM)
CONJ = Const("conj", Arrow(FRM, Arrow(FRM, FRM)))
DISJ = Const("disj", Arrow(FRM, Arrow(FRM, FRM)))
IMPL = Const("impl", Arrow(ATM, Arrow(FRM, FRM)))
INJ = Const("inj", Arrow(ATM, FRM))


def pi_const(ty):
    """Universal spec quantifier at argument type ty."""
    return Const("pi", Arrow(Arrow(ty, FRM), FRM))


def sigma_const(ty):
    """Existential spec quantifier at argument type ty."""
    return Const("sigma", Arrow(Arrow(ty, FRM), FRM))


def cons_list(items, tail=NIL):
    out = tail
    for a in reversed(items):
        out = CONS(a, out)
    return out


def list_parts(t):
    """Split an atm list term into (items, tail)."""
    from .terms import spine
    items = []
    while True:
        head, args = spine(t)
        if head == CONS and len(args) == 2:
            items.append(args[0])
            t = args[1]
        else:
            return items, t
