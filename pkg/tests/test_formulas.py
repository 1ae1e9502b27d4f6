import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vaporlab import formulas as fm
from vaporlab.errors import ExtractionError, NoThresholdError, PatternUnstableError, VaporlabError
from vaporlab.sequences import explicit, factorials

F15 = factorials(1, 15)


def brute_tail_values(terms, phi, k, mode="injective"):
    """Set of truth values over every mode tuple from indices > k."""
    tail = terms[k + 1 :]
    gen = itertools.permutations if mode == "injective" else itertools.combinations
    out = set()
    for idx in gen(range(len(tail)), phi.arity):
        vals = [tail[i] for i in idx]
        out.add(fm.evaluate(phi, vals[: getattr(phi, "m", 1)], vals[getattr(phi, "m", 1) :]))
    return out


def brute_pattern_values(terms, phi, k):
    """pattern label -> set of truth values, by enumerating all tuples."""
    tail = terms[k + 1 :]
    table = {}
    for blocks in fm.set_partitions(phi.arity):
        label = fm._pattern_label(phi, blocks)
        seen = set()
        for pick in itertools.permutations(tail, len(blocks)):
            vals = [0] * phi.arity
            for b, v in zip(blocks, pick):
                for p in b:
                    vals[p] = v
            seen.add(phi.holds(vals))
        if seen:
            table[label] = seen
    return table


def test_parse_and_print():
    assert fm.parse_formula("lineq 1 2 -3") == fm.LinearEq(1, 2, -3)
    assert str(fm.parse_formula("cong 6 0")) == "cong 6 0"
    for phi in (fm.LinearEq(2, 3, 7), fm.Congruence(5, 4)):
        assert fm.formula_from_dict(phi.to_dict()) == phi
        assert fm.parse_formula(str(phi)) == phi
    with pytest.raises(VaporlabError):
        fm.parse_formula("lineq 0 1 0")


def test_evaluate():
    assert fm.evaluate(fm.LinearEq(1, 2, 0), [2], [1, 1])
    assert not fm.evaluate(fm.LinearEq(1, 2, 0), [6], [2, 2])
    assert fm.evaluate(fm.Congruence(7, 3), [10])
    with pytest.raises(VaporlabError):
        fm.evaluate(fm.LinearEq(1, 2, 0), [2], [1])


def test_threshold_examples():
    th = fm.threshold(F15, fm.LinearEq(1, 2, 0))
    assert (th.k_phi, th.tail_value) == (1, False)
    th = fm.threshold(F15, fm.Congruence(6, 0))
    assert (th.k_phi, th.tail_value) == (2, True)
    th = fm.threshold(F15, fm.Congruence(7, 3))
    assert (th.k_phi, th.tail_value) == (6, False)
    assert fm.Threshold.from_dict(th.to_dict()) == th


def test_threshold_no_stabilization():
    with pytest.raises(NoThresholdError):
        fm.threshold(explicit([1, 2, 3, 4, 5]), fm.Congruence(2, 0))


def test_ei_check_examples():
    rep = fm.ei_check(factorials(1, 12), [fm.LinearEq(1, 2, 0), fm.Congruence(2, 0)])
    assert rep.ok and [e.k_phi for e in rep.entries] == [1, 1]
    assert fm.IndiscernibilityReport.from_dict(rep.to_dict()) == rep
    rep = fm.ei_check(explicit([1, 2, 3, 4, 5, 6]), [fm.LinearEq(1, 2, 0)])
    assert not rep.ok and rep.entries[0].k_phi is None
    rep = fm.ei_check(explicit([2, 4, 6, 8]), [fm.Congruence(2, 0)], mode="increasing")
    assert rep.ok and rep.entries[0].k_phi == 0 and rep.entries[0].tail_value is True


@pytest.mark.parametrize("mode", fm.MODES)
@pytest.mark.parametrize("r", [-4, -1, 0, 1, 5])
def test_tail_agreement_matches_brute_force(mode, r):
    terms = factorials(1, 7).terms
    phi = fm.LinearEq(1, 2, r)
    for k in range(-1, 5):
        agree, value, _, total = fm.tail_agreement(terms, phi, k, mode)
        seen = brute_tail_values(terms, phi, k, mode)
        if total == 0:
            assert value is None and not seen
        else:
            assert agree == (len(seen) == 1)
            if agree:
                assert seen == {value}


def test_threshold_soundness_grid():
    terms = factorials(1, 9).terms
    for m, n in itertools.product((1, 2), repeat=2):
        for r in range(-6, 7):
            phi = fm.LinearEq(m, n, r)
            th = fm.threshold(terms, phi)
            assert brute_tail_values(terms, phi, th.k_phi) <= {th.tail_value}


def test_congruence_stabilization_for_factorials():
    for start in (1, 2, 3):
        seq = factorials(start, 60)
        for m in range(2, 51):
            th = fm.threshold(seq, fm.Congruence(m, 0))
            assert th.tail_value is True
            assert th.k_phi <= max(0, m - start)


def test_set_partitions_bell_numbers():
    assert [sum(1 for _ in fm.set_partitions(n)) for n in range(7)] == [1, 1, 2, 5, 15, 52, 203]


def test_pattern_table_examples():
    t = fm.equality_pattern_table(F15, fm.LinearEq(1, 2, 0), 1)
    assert t.as_map() and not any(t.as_map().values())
    t = fm.equality_pattern_table(F15, fm.LinearEq(1, 1, 0), 0)
    assert t.as_map() == {"x1=y1": True, "x1|y1": False}
    # index 0 sits outside the tail after 0, so the (1; 2, 2)-style witness needs k = -1
    fm.equality_pattern_table(F15, fm.LinearEq(1, 2, 0), 0)
    with pytest.raises(PatternUnstableError) as info:
        fm.equality_pattern_table(F15, fm.LinearEq(1, 2, 0), -1)
    err = info.value
    assert err.pattern == "x1|y1=y2"
    assert err.witness_true == [2, 1, 1]
    assert fm.LinearEq(1, 2, 0).holds(err.witness_true)
    assert not fm.LinearEq(1, 2, 0).holds(err.witness_false)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(1, 60), min_size=3, max_size=7, unique=True),
    st.integers(1, 2),
    st.integers(1, 2),
    st.integers(-10, 10),
    st.integers(-1, 1),
)
def test_pattern_table_matches_brute_force(values, m, n, r, k):
    terms = sorted(values)
    phi = fm.LinearEq(m, n, r)
    brute = brute_pattern_values(terms, phi, k)
    unstable = {p for p, s in brute.items() if len(s) > 1}
    if unstable:
        with pytest.raises(PatternUnstableError) as info:
            fm.equality_pattern_table(terms, phi, k)
        assert info.value.pattern in unstable
    else:
        t = fm.equality_pattern_table(terms, phi, k)
        assert {p: {v} for p, v in t.entries} == brute


def test_pattern_table_roundtrip():
    t = fm.equality_pattern_table(F15, fm.Congruence(3, 0), 2)
    assert t.as_map() == {"x": True}
    assert fm.PatternTable.from_dict(t.to_dict()) == t


def test_extract_examples():
    res = fm.extract_ei_subsequence(list(range(1, 21)), [fm.Congruence(2, 0)], 5)
    assert res.indices == (11, 13, 15, 17, 19)
    res = fm.extract_ei_subsequence(list(factorials(1, 12).terms), [fm.LinearEq(1, 2, 0)], 4)
    assert res.indices == (8, 9, 10, 11) and res.colors == (False,)
    with pytest.raises(ExtractionError):
        fm.extract_ei_subsequence(list(range(1, 7)), [fm.LinearEq(1, 2, 0)], 6)


def test_extract_budget():
    with pytest.raises(ExtractionError, match="budget"):
        fm.extract_ei_subsequence(list(range(1, 40)), [fm.LinearEq(1, 2, 0)], 12, budget=5)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 80), min_size=4, max_size=12, unique=True), st.integers(-3, 3))
def test_extraction_output_is_monochromatic(values, r):
    base = sorted(values)
    phis = [fm.LinearEq(1, 2, r), fm.Congruence(3, 1)]
    try:
        res = fm.extract_ei_subsequence(base, phis, 3)
    except ExtractionError:
        return
    chosen = [base[i] for i in res.indices]
    for phi, color in zip(phis, res.colors):
        assert brute_tail_values(chosen, phi, -1) == {color}
