"""Sequent engine: tactics, annotation discipline, fixed point rules."""

import pytest

from nabella.engine import (AnnotationViolation, NominalInInvariant,
                            NotCoinductive, NotInductive, ProofError)
from nabella.session import CommandError, Session, render_state


def base_session():
    s = Session()
    s.execute("Kind i type. Type z i. Type s i -> i.")
    s.execute("Define nat : i -> prop by nat z ; nat (s N) := nat N.")
    s.execute("Define p : prop by p := p.")
    s.execute("CoDefine q : prop by q := q.")
    s.execute("Define r : i -> prop by r X.")
    return s


@pytest.fixture
def sess():
    return base_session()


def cause(excinfo):
    return type(excinfo.value.__cause__)


def hyp_names(s):
    return [h[0] for h in s.proof.focused().hyps]


def run(s, text):
    return s.execute(text)


# ---------------------------------------------------------------------------
# basic tactics

def test_intros_and_search(sess):
    run(sess, "Theorem a : forall N, nat N -> nat N. intros. search.")
    assert "a" in sess.lemmas


def test_split_left_right_exists(sess):
    run(sess, "Theorem b : nat z /\\ (nat (s z) \\/ nat z)."
              " split. search. right. search.")
    run(sess, "Theorem c : exists N, nat (s N). exists z. search.")
    assert "b" in sess.lemmas and "c" in sess.lemmas


def test_assert_adds_hypothesis(sess):
    run(sess, "Theorem d : nat (s z) -> nat z. intros. assert nat z.")
    assert sess.proof is not None
    # the asserted formula was discharged automatically and is available
    assert any(h[0].startswith("H") for h in sess.proof.focused().hyps)
    run(sess, "search.")
    assert "d" in sess.lemmas


def test_case_keep(sess):
    run(sess, "Theorem e : nat (s z) -> nat z. intros. case H1 (keep).")
    names = hyp_names(sess)
    assert "H1" in names and "H2" in names


def test_case_drops_by_default(sess):
    run(sess, "Theorem f : nat (s z) -> nat z. intros. case H1.")
    assert "H1" not in hyp_names(sess)


def test_nabla_intro_produces_nominal(sess):
    run(sess, "Theorem g : nabla x, r x. intros.")
    noms = dict(sess.proof.focused().all_noms())
    assert "n1" in noms


# ---------------------------------------------------------------------------
# induction annotations

def test_induction_annotations(sess):
    run(sess, "Theorem h : forall N, nat N -> nat N. induction on 1.")
    st = render_state(sess.proof)
    assert "IH" in st and "*" in st and "@" in st
    run(sess, "intros. case H1.")
    # first subgoal: base case for z
    run(sess, "search.")
    # step case: the unwrapped premise carries * and feeds the IH
    st = render_state(sess.proof)
    assert "nat N1*" in st
    run(sess, "apply IH to H2. search.")
    assert "h" in sess.lemmas


def test_ih_not_usable_before_case(sess):
    with pytest.raises(CommandError, match="does not satisfy") as e:
        run(sess, "Theorem i : forall N, nat N -> nat N."
                  " induction on 1. intros. apply IH to H1.")
    assert cause(e) is AnnotationViolation


# ---------------------------------------------------------------------------
# fixed point sanity, annotation route

def test_least_fixed_point_empty_by_induction(sess):
    run(sess, "Theorem j : p -> false."
              " induction on 1. intros. case H1. apply IH to H2. search.")
    assert "j" in sess.lemmas


def test_greatest_fixed_point_full_by_coinduction(sess):
    run(sess, "Theorem k : q. coinduction. unfold. search.")
    assert "k" in sess.lemmas


# ---------------------------------------------------------------------------
# fixed point sanity, explicit invariants

def test_least_fixed_point_empty_by_invariant(sess):
    run(sess, "Theorem l : p -> false. intros. il H1 with false.")
    # body of p with p replaced by the invariant yields no preservation
    # subgoals; only the main goal under the invariant remains
    assert len(sess.proof.subgoals) == 1
    st = render_state(sess.proof)
    assert "false" in st
    run(sess, "search.")
    assert "l" in sess.lemmas


def test_greatest_fixed_point_full_by_invariant(sess):
    run(sess, "Theorem m : q. cir with true.")
    # one subgoal for the invariant itself, one for its preservation
    assert len(sess.proof.subgoals) == 2
    run(sess, "search. search.")
    assert "m" in sess.lemmas


def test_il_invariant_with_binders(sess):
    run(sess, "Theorem n : forall N, nat N -> true."
              " intros. il H1 with x \\ true.")
    # one preservation subgoal per clause of nat, then the main goal
    assert len(sess.proof.subgoals) == 3
    run(sess, "search. search. search.")
    assert "n" in sess.lemmas


# ---------------------------------------------------------------------------
# negative suite

def test_not_inductive_flavor(sess):
    with pytest.raises(CommandError, match="coinductive") as e:
        run(sess, "Theorem o : q -> false. induction on 1.")
    assert cause(e) is NotInductive


def test_not_coinductive_flavor(sess):
    with pytest.raises(CommandError, match="coinductively") as e:
        run(sess, "Theorem pp : p. coinduction.")
    assert cause(e) is NotCoinductive


def test_il_rejects_greatest_fixed_point(sess):
    with pytest.raises(CommandError, match="greatest") as e:
        run(sess, "Theorem qq : q -> false. intros. il H1 with false.")
    assert cause(e) is NotInductive


def test_cir_rejects_least_fixed_point(sess):
    with pytest.raises(CommandError) as e:
        run(sess, "Theorem rr : p. cir with true.")
    assert cause(e) is NotCoinductive


def test_nominal_in_invariant(sess):
    with pytest.raises(CommandError, match="nominal") as e:
        run(sess, "Theorem ss : nabla x, nat x -> false."
                  " intros. il H1 with r n1.")
    assert cause(e) is NominalInInvariant


def test_circular_proof_fails(sess):
    with pytest.raises(CommandError, match="no proof") as e:
        run(sess, "Theorem tt : p. unfold. search.")
    assert cause(e) is ProofError
    # the failure leaves the proof open rather than closing it
    assert sess.proof is not None
    assert "tt" not in sess.lemmas


def test_case_on_coinduction_hypothesis(sess):
    run(sess, "Theorem uu : q. coinduction.")
    with pytest.raises(CommandError, match="case-analyse") as e:
        run(sess, "case CH.")
    assert cause(e) is AnnotationViolation


def test_double_unfold_of_coinduction_goal(sess):
    run(sess, "Theorem vv : q. coinduction. unfold.")
    with pytest.raises(CommandError, match="again") as e:
        run(sess, "unfold.")
    assert cause(e) is AnnotationViolation


def test_coinduction_hypothesis_only_proves_goal(sess):
    run(sess, "Theorem ww : q -> q. coinduction. intros.")
    with pytest.raises(CommandError) as e:
        run(sess, "apply CH to H1. case H2.")
    assert cause(e) is AnnotationViolation


# ---------------------------------------------------------------------------
# nominal permutations on hypotheses

def test_permute_hypothesis(sess):
    run(sess, "Theorem xx : nabla x y, r x -> r y."
              " intros. permute H1 (n1 n2). search.")
    assert "xx" in sess.lemmas
