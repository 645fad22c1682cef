"""Definitions: clause checks, stratification, levels, fixed point form."""

import pytest

from nabella import formulas as F
from nabella.definitions import (DefError, StratError, infer_levels, lvl,
                                 translate_pattern_def)
from nabella.session import CommandError, Session


@pytest.fixture
def base():
    s = Session()
    s.execute("Kind i type. Type z i. Type s i -> i.")
    return s


# ---------------------------------------------------------------------------
# accepted definitions

def test_nat_accepted(base):
    base.execute("Define nat : i -> prop by nat z ; nat (s N) := nat N.")
    d = base.defs.get("nat")
    assert d.flavor == "inductive"
    assert d.level == 1
    assert len(d.clauses) == 2


def test_lt_accepted(base):
    base.execute("Define lt : i -> i -> prop by"
                 "  lt z (s N) ; lt (s M) (s N) := lt M N.")
    assert base.defs.get("lt").level == 1


def test_ctx_with_nabla_head_accepted(stlc_session):
    stlc_session.execute(
        "Define ctx : olist -> prop by"
        "  ctx nil ; nabla x, ctx (of x T :: L) := ctx L.")
    d = stlc_session.defs.get("ctx")
    assert d.level >= 1
    assert len(d.clauses[1].nabla) == 1


def test_coinductive_accepted(base):
    base.execute("CoDefine v : i -> prop by v X := v X.")
    assert base.defs.get("v").flavor == "coinductive"


def test_dependency_raises_level(base):
    base.execute("Define nat : i -> prop by nat z ; nat (s N) := nat N.")
    base.execute("Define notnat : i -> prop by notnat N := nat N -> false.")
    assert base.defs.get("notnat").level == base.defs.get("nat").level + 2


# ---------------------------------------------------------------------------
# rejected definitions

def test_negative_self_occurrence_rejected(base):
    with pytest.raises(CommandError, match="left of an implication"):
        base.execute("Define a : prop by a := a -> false.")
    assert base.defs.get("a") is None


def test_mutual_block_recursion_gets_merge_hint(base):
    with pytest.raises(CommandError, match="merge"):
        base.execute("Define p : prop, q : prop by p := q ; q := p.")


def test_nominal_in_head_rejected(base):
    with pytest.raises(CommandError, match="clause heads"):
        base.execute("Define r : i -> prop by r n1.")


def test_nominal_in_body_rejected(base):
    base.execute("Define nat : i -> prop by nat z ; nat (s N) := nat N.")
    with pytest.raises(CommandError, match="clause bodies"):
        base.execute("Define r : i -> prop by r X := nat n1.")


def test_coinductive_multiple_clauses_rejected(base):
    with pytest.raises(CommandError, match="exactly one clause"):
        base.execute("CoDefine w : i -> prop by w z ; w (s N).")


def test_coinductive_nonvariable_head_rejected(base):
    with pytest.raises(CommandError, match="distinct variable"):
        base.execute("CoDefine w : i -> prop by w z := true.")


def test_coinductive_nabla_head_rejected(base):
    with pytest.raises(CommandError, match="nabla"):
        base.execute("CoDefine w : i -> prop by nabla x, w x := true.")


def test_redefinition_rejected(base):
    base.execute("Define nat : i -> prop by nat z.")
    with pytest.raises(CommandError, match="already"):
        base.execute("Define nat : i -> prop by nat z.")


# ---------------------------------------------------------------------------
# levels

def test_lvl_connectives():
    p = F.Atom("p", ())
    q = F.Atom("q", ())
    levels = {"p": 1, "q": 2}
    assert lvl(p, levels) == 1
    assert lvl(F.And(p, q), levels) == 2
    assert lvl(F.Or(p, q), levels) == 2
    assert lvl(F.Imp(p, q), levels) == max(1 + 1, 2)
    assert lvl(F.Imp(q, p), levels) == max(2 + 1, 1)
    assert lvl(F.Top(), levels) == 0
    assert lvl(F.Bot(), levels) == 0


def test_seq_table_levels(stlc_session):
    defs = stlc_session.defs.defs
    assert set(defs) >= {"member", "seq", "prog", "nat", "lt"}
    assert defs["seq"].level > defs["member"].level
    levels = {p: d.level for p, d in defs.items()}
    # the installed table satisfies the stratification inequalities
    from nabella.definitions import _replace_pred_with_top
    for p, d in defs.items():
        for c in d.clauses:
            assert lvl(c.body, levels) <= d.level
            assert lvl(_replace_pred_with_top(c.body, p), levels) < d.level


def test_seq_block_reinferred(stlc_session):
    defs = stlc_session.defs.defs
    existing = {p: d for p, d in defs.items() if p != "seq"}
    out = infer_levels([defs["seq"]], existing)
    assert out["seq"] == defs["seq"].level


# ---------------------------------------------------------------------------
# fixed point translation

def test_translate_pattern_def(base):
    base.execute("Define nat : i -> prop by nat z ; nat (s N) := nat N.")
    args, body = translate_pattern_def(base.defs.get("nat"))
    assert len(args) == 1
    assert isinstance(body, F.Or)
    # base clause: just an abstraction statement of degree 0
    left = body.left
    assert isinstance(left, F.NAbs) and left.degree == 0
    # step clause: one existential over N
    right = body.right
    assert isinstance(right, F.Quant) and right.kind == "exists"


def test_translate_nabla_clause(stlc_session):
    stlc_session.execute(
        "Define name : tm -> prop by nabla x, name x.")
    args, body = translate_pattern_def(stlc_session.defs.get("name"))
    na = body
    while isinstance(na, (F.Quant, F.And)):
        na = na.left if isinstance(na, F.And) else na.body
    assert isinstance(na, F.NAbs)
    assert na.degree == 1
