"""Window contents, rewrite classification, validation, morphisms and tags."""

import itertools

import pytest
from hypothesis import given, strategies as st

from redukto.model import (
    LEFT_SENTINEL as C,
    RIGHT_SENTINEL as D,
    AutomatonSpec,
    ClassFlags,
    GnfGrammar,
    GnfRule,
    PreconditionError,
    SymbolError,
    apply_morphism,
    classify_automaton,
    classify_rewrite,
    is_window_content,
    min_deleted_blocks,
    mvl,
    mvr,
    project,
    sl,
    validate_automaton,
    word_weight,
)

AB = frozenset({"a", "b"})


def embeddings_block_counts(u, v):
    """Independent oracle: enumerate every embedding of v into u as a
    subsequence (never deleting sentinels) and count its deleted blocks."""
    counts = []

    def walk(i, j, last_deleted, blocks):
        if i == len(u):
            if j == len(v):
                counts.append(blocks)
            return
        if j < len(v) and u[i] == v[j]:
            walk(i + 1, j + 1, False, blocks)
        if u[i] not in (C, D):
            walk(i + 1, j, True, blocks + (0 if last_deleted else 1))

    walk(0, 0, False, 0)
    return counts


def test_min_blocks_matches_exhaustive_oracle():
    for total in range(0, 7):
        for u in itertools.product("ab", repeat=total):
            for keep in range(0, total):
                for v in itertools.product("ab", repeat=keep):
                    counts = embeddings_block_counts(u, v)
                    expect = min(counts) if counts else None
                    assert min_deleted_blocks(u, v) == expect, (u, v)


def test_classify_rewrite_single_block():
    assert classify_rewrite(("a", "b", "c"), ("a", "c")) == "CL"


def test_classify_rewrite_three_blocks_is_deletion_only():
    # Exhaustive embedding search confirms the minimum is three blocks.
    u = tuple("abcdefg")
    v = tuple("aceg")
    assert min(embeddings_block_counts(u, v)) == 3
    assert classify_rewrite(u, v) == "DL-not-CL"


def test_classify_rewrite_replacement_is_not_deletion():
    assert classify_rewrite(("a", "a", D), ("b", D)) == "SL-not-DL"


def test_classify_rewrite_illegal_cases():
    assert classify_rewrite(("a", "b"), ("a", "b")) == "illegal"
    assert classify_rewrite(("a", "b"), ("a", "b", "c")) == "illegal"
    assert classify_rewrite((C, "a", "b"), ("a",)) == "illegal"
    assert classify_rewrite(("a", "b", D), ("a",)) == "illegal"


def test_contextual_implies_subsequence_exhaustively():
    # CL implies DL on every pair of short words over two letters.
    for n in range(1, 6):
        for u in itertools.product("ab", repeat=n):
            for m in range(0, n):
                for v in itertools.product("ab", repeat=m):
                    if classify_rewrite(u, v) == "CL":
                        assert min_deleted_blocks(u, v) is not None


def test_window_content_shapes():
    k = 3
    assert is_window_content((C, "a", "a"), k, AB)
    assert is_window_content(("a", "a", "a"), k, AB)
    assert is_window_content(("a", D), k, AB)
    assert is_window_content((C, "a", D), k, AB)
    assert is_window_content((C, D), k, AB)
    assert is_window_content((D,), k, AB)
    # Sentinel-free contents must fill the window.
    assert not is_window_content(("a", "a"), k, AB)
    # Left-anchored contents count as window contents at any length; with a
    # window of 3 they simply never occur on a tape short of the end.
    assert is_window_content((C, "a"), k, AB)
    assert not is_window_content(("a", C, "a"), k, AB)
    assert not is_window_content((D, "a", "a"), k, AB)
    assert not is_window_content((), k, AB)
    assert not is_window_content(("a",) * 4, k, AB)


def _spec(table, flags=ClassFlags(deterministic=True, direction="R", form="SL", aux="WW"),
          morphism=None, weights=None, window=3, states=("q0", "q1")):
    return AutomatonSpec(
        name="t",
        states=frozenset(states),
        initial="q0",
        window=window,
        input_alphabet=frozenset({"a"}),
        work_alphabet=AB,
        table=table,
        flags=flags,
        morphism=morphism,
        weights=weights,
    )


def test_validate_accepts_every_catalog_entry():
    from redukto.catalog import catalog_list

    for entry in catalog_list():
        if entry.kind != "automaton":
            continue
        report = validate_automaton(entry.spec)
        assert report.ok, (entry.name, report.violations)


def test_validate_rejects_equal_length_target():
    bad = _spec({("q0", ("a", "a", D)): [sl("q1", ("a", "b", D))]})
    report = validate_automaton(bad)
    assert any("not shorter" in v for v in report.violations)


def test_validate_rejects_sentinel_mismatch():
    bad = _spec({("q0", ("a", "a", D)): [sl("q1", ("b",))]})
    report = validate_automaton(bad)
    assert any("sentinel mismatch" in v for v in report.violations)


def test_validate_flags_contextual_claim(m_e):
    from dataclasses import replace

    claimed = replace(
        m_e.spec, flags=replace(m_e.spec.flags, form="CL"), table=dict(m_e.spec.table)
    )
    report = validate_automaton(claimed)
    assert any("CL form" in v for v in report.violations)


def test_validate_rejects_mvl_under_rr():
    bad = _spec({("q0", ("a", "a", "a")): [mvl("q0")]},
                flags=ClassFlags(direction="RR", deterministic=True))
    report = validate_automaton(bad)
    assert any("MVL" in v for v in report.violations)


def test_validate_rejects_nondeterministic_table_under_det_flag():
    bad = _spec({("q0", ("a", "a", "a")): [mvr("q0"), mvr("q1")]})
    report = validate_automaton(bad)
    assert any("deterministic" in v for v in report.violations)


def test_validate_requires_total_morphism():
    bad = _spec({("q0", (C, "a", D)): [mvr("q0")]}, morphism={"a": "a"})
    report = validate_automaton(bad)
    assert any("not total" in v for v in report.violations)


def test_validate_requires_identity_morphism_on_input():
    bad = _spec({}, morphism={"a": "a", "b": "a"})
    assert validate_automaton(bad).ok
    worse = _spec({}, morphism={"a": "b", "b": "a"})
    assert not validate_automaton(worse).ok


def test_empty_target_is_a_deviation_not_a_violation():
    spec = _spec({("q0", ("a", "a", "a")): [sl("q1", ())]})
    report = validate_automaton(spec)
    assert report.ok
    assert any("deleted entirely" in d for d in report.deviations)


def test_classify_automaton_tags(m_e, dyck1):
    tags = classify_automaton(m_e.spec)
    assert (tags.deterministic, tags.direction, tags.form, tags.aux, tags.window) == (
        True, "R", "SL", "WW", 3,
    )
    tags = classify_automaton(dyck1.spec)
    assert (tags.deterministic, tags.direction, tags.form, tags.aux, tags.window) == (
        True, "R", "CL", "none", 2,
    )


def test_classify_automaton_mr_degree():
    from redukto.catalog import catalog_get

    tags = classify_automaton(catalog_get("lm_1").spec)
    assert tags.direction == "RR"
    assert tags.form == "CL"
    assert tags.mr_degree == 2


def test_classify_weakens_with_added_instruction(m_e):
    # Adding an instruction never strengthens a tag.
    from dataclasses import replace

    base = classify_automaton(m_e.spec)
    table = dict(m_e.spec.table)
    table[("q1", ("a", "a", "a"))] = table[("q1", ("a", "a", "a"))] + (mvl("q0"),)
    grown = replace(m_e.spec, table=table,
                    flags=replace(m_e.spec.flags, deterministic=False, direction="RL"))
    tags = classify_automaton(grown)
    assert tags.deterministic <= base.deterministic
    assert tags.direction == "RL"


def test_project_examples():
    sigma, gamma = frozenset({"a", "b"}), frozenset({"a", "b", "A", "B"})
    assert project(("a", "A", "b", "B"), sigma, gamma) == ("a", "b")
    assert project((), sigma, gamma) == ()
    assert project(("A", "A"), sigma, gamma) == ()
    with pytest.raises(SymbolError):
        project(("z",), sigma, gamma)


def test_apply_morphism_examples():
    h = {"(1,a)": "a", "(2,a)": "a", "a": "a"}
    assert apply_morphism(h, ("(1,a)", "(2,a)")) == ("a", "a")
    assert apply_morphism(h, ("a", "a")) == ("a", "a")
    with pytest.raises(SymbolError):
        apply_morphism(h, ("b",))


@given(st.lists(st.sampled_from(["a", "b", "(1,a)"]), max_size=12))
def test_morphism_preserves_length(tokens):
    h = {"a": "a", "b": "b", "(1,a)": "a"}
    assert len(apply_morphism(h, tuple(tokens))) == len(tokens)


@given(st.lists(st.sampled_from(["a", "b", "A"]), max_size=12))
def test_projection_never_grows(tokens):
    sigma, gamma = frozenset({"a", "b"}), frozenset({"a", "b", "A"})
    assert len(project(tuple(tokens), sigma, gamma)) <= len(tokens)


def test_word_weight_is_additive():
    weights = {"a": 3, "b": 1}
    assert word_weight(weights, ()) == 0
    assert word_weight(weights, ("a", "b", "a")) == 7


def test_gnf_grammar_validation():
    with pytest.raises(PreconditionError):
        GnfGrammar("g", frozenset({"S"}), frozenset({"a"}), "T",
                   (GnfRule("S", "a", ()),))
    with pytest.raises(PreconditionError):
        GnfGrammar("g", frozenset({"S"}), frozenset({"a"}), "S",
                   (GnfRule("S", "S", ()),))
    good = GnfGrammar("g", frozenset({"S"}), frozenset({"a"}), "S",
                      (GnfRule("S", "a", ("S",)), GnfRule("S", "a", ())))
    assert good.rule(2) == GnfRule("S", "a", ())
    assert [i for i, _ in good.rules_for("S")] == [1, 2]
