"""End-to-end proof scripts in corpus/ all check successfully."""

import os

import pytest

from nabella.session import Session, check_file, split_statements

EXPECTED = {
    "even_odd.thm": ["even_odd", "odd_even", "nat_even_or_odd"],
    "ackermann.thm": ["ack_total"],
    "fixpoint_sanity.thm": ["p_absurd", "p_absurd_inv",
                            "q_holds", "q_holds_inv"],
    "sim.thm": ["sim_p0_q0_gen", "sim_p0_q0"],
    "type_uniq.thm": ["member_prune", "ctx_mem", "ctx_uniq", "type_uniq"],
    "preservation.thm": ["preservation"],
    "seq_meta.thm": ["le_refl", "le_max", "seq_le", "nat_prune",
                     "seq_monotone", "member_inst", "prog_inst",
                     "seq_inst", "seq_cut_gen", "seq_cut"],
}


@pytest.mark.parametrize("thm", sorted(EXPECTED))
def test_corpus_file_checks(corpus_dir, thm):
    ok, report = check_file(os.path.join(corpus_dir, thm))
    assert ok, "\n".join(report)


@pytest.mark.parametrize("thm", sorted(EXPECTED))
def test_corpus_theorems_proved(corpus_dir, thm):
    s = Session(base_dir=corpus_dir)
    with open(os.path.join(corpus_dir, thm)) as fh:
        for toks in split_statements(fh.read()):
            s.execute_statement(toks)
    assert s.theorems_proved == EXPECTED[thm]


def test_delayed_induction_hypothesis(corpus_dir):
    # nat_even_or_odd cases before applying the induction hypothesis
    with open(os.path.join(corpus_dir, "even_odd.thm")) as fh:
        text = fh.read()
    assert "nat_even_or_odd" in text


def test_nested_induction_annotations(corpus_dir):
    # the Ackermann proof uses a nested induction: ** and @@ levels
    with open(os.path.join(corpus_dir, "ackermann.thm")) as fh:
        text = fh.read()
    assert "induction on 1" in text and "induction on 2" in text
    s = Session(base_dir=corpus_dir)
    stmts = list(split_statements(open(
        os.path.join(corpus_dir, "ackermann.thm")).read()))
    seen_levels = False
    from nabella.session import render_state
    for toks in stmts:
        s.execute_statement(toks)
        if s.proof is not None:
            st = render_state(s.proof)
            if "**" in st or "@@" in st:
                seen_levels = True
    assert seen_levels


def test_preservation_uses_spec_tactics(corpus_dir):
    with open(os.path.join(corpus_dir, "preservation.thm")) as fh:
        text = fh.read()
    assert "cut " in text and "inst " in text
