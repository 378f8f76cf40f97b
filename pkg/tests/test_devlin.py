import itertools
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from localorder.devlin import (
    AntichainModel,
    EnvelopeError,
    FiniteSubset,
    build_antichain,
    count_devlin_types,
    devlin_types,
    em_code,
    em_equivalent_bruteforce,
    envelope,
    envelope_candidates,
    envelope_census,
    is_devlin_type,
    meet_closure,
    realized_pattern,
    sigma_of,
)
from localorder.pstruct import PnStructure
from localorder.tangent import tangent_derivative
from localorder.trees import ColoredTree, StrongSubtree, extensions, filter_by_sequence, is_prefix


def fs(nodes, host):
    return FiniteSubset(frozenset(nodes), host)


H1 = ColoredTree.cyclic(7, 1)
H2 = ColoredTree.cyclic(7, 2)


def test_meet_closure():
    a = fs(["0", "100", "1010"], H1)
    assert meet_closure(a).nodes == {"", "0", "10", "100", "1010"}
    assert sigma_of(fs(["0", "1"], H2)) == (1, 2)


def test_em_code_same_level_singletons():
    assert em_code(fs(["0"], H2)) == em_code(fs(["1"], H2))


def test_em_code_colour_sensitivity():
    assert em_code(fs(["0", "1"], H1)) == em_code(fs(["00", "01"], H1))
    assert em_code(fs(["0", "1"], H2)) != em_code(fs(["00", "01"], H2))
    assert em_code(fs(["0", "1"], H2), "none") == em_code(fs(["00", "01"], H2), "none")


@given(st.lists(st.text("01", max_size=4), min_size=1, max_size=3, unique=True), st.text("01", min_size=1, max_size=2))
def test_em_code_invariant_under_prefixing_when_uncoloured(nodes, prefix):
    a = fs(nodes, H1)
    b = fs([prefix + x for x in nodes], H1)
    assert em_code(a) == em_code(b)


subsets = st.lists(st.text("01", max_size=4), min_size=1, max_size=3, unique=True)


@settings(max_examples=150)
@given(subsets, subsets, st.sampled_from(["all", "members", "none"]), st.sampled_from([H1, H2]))
def test_em_code_congruent_with_bijection_search(x, y, scope, host):
    a, b = fs(x, host), fs(y, host)
    assert (em_code(a, scope) == em_code(b, scope)) == em_equivalent_bruteforce(a, b, scope)


def test_em_code_congruence_exhaustive_small():
    host = ColoredTree.cyclic(4, 2)
    sets = [fs(c, host) for k in (1, 2) for c in itertools.combinations(host.nodes(), k)]
    codes = [em_code(a) for a in sets]
    rng = random.Random(7)
    pairs = [(i, j) for i in range(len(sets)) for j in range(i + 1, len(sets)) if codes[i] == codes[j]]
    pairs += [tuple(rng.sample(range(len(sets)), 2)) for _ in range(400)]
    for i, j in pairs:
        assert (codes[i] == codes[j]) == em_equivalent_bruteforce(sets[i], sets[j])


def test_em_code_json():
    payload = json.loads(em_code(fs(["0", "100", "1010"], H2)).to_json())
    assert payload["size"] == 5 and payload["color_scope"] == "all"
    assert [n["member"] for n in payload["nodes"]] == [False, True, False, True, True]


def test_devlin_examples():
    assert is_devlin_type(fs(["0", "100", "1010"], H1))
    assert not is_devlin_type(fs(["0", "1"], H1))
    assert not is_devlin_type(fs(["0", "01"], H1))  # 0 is a member below another member
    assert not is_devlin_type(fs(["01", "10"], H1))  # passing digit 1 off the path
    assert not is_devlin_type(fs([], H1))


@given(st.lists(st.text("01", max_size=5), min_size=1, max_size=4, unique=True))
def test_devlin_clauses_inherited_by_subsets(nodes):
    a = fs(nodes, H1)
    if is_devlin_type(a):
        for k in range(1, len(nodes)):
            for c in itertools.combinations(nodes, k):
                assert is_devlin_type(fs(c, H1))


def test_realized_pattern():
    assert realized_pattern(fs(["0", "100", "1010"], H2)).word == "221"
    a = fs(["00", "1"], H2)
    assert realized_pattern(a).parts == (H2.color("00"), H2.color("1"))


@pytest.mark.parametrize("word, n, expected", [("1", 1, 1), ("11", 1, 2), ("111", 1, 16), ("1", 2, 1), ("2", 2, 1)])
def test_devlin_counts(word, n, expected):
    assert count_devlin_types(PnStructure.from_word(word, n)).count == expected


@pytest.mark.parametrize("word", ["11", "12", "21", "22"])
def test_devlin_counts_two_colours_size_two(word):
    res = count_devlin_types(PnStructure.from_word(word, 2))
    assert res.count == tangent_derivative(3)


def test_devlin_all_scope_separates_meet_colours():
    # Comparing colours of meet nodes as well doubles the size-2 count when n = 2.
    assert count_devlin_types(PnStructure.from_word("11", 2), color_scope="all").count == 4
    assert count_devlin_types(PnStructure.from_word("11", 1), color_scope="all").count == 2


def test_devlin_witnesses_are_devlin_and_realize_pattern():
    x = PnStructure.from_word("12", 2)
    for code, a in devlin_types(x, 6).items():
        assert is_devlin_type(a)
        assert realized_pattern(a) == x
        assert em_code(a, "members") == code


def test_envelope_identity():
    host = ColoredTree.cyclic(3, 1)
    full = StrongSubtree(host, (0, 1, 2), tuple(tuple(extensions("", l)) for l in range(3)))
    a = fs(["00", "1"], host)
    assert sigma_of(a) == host.sigma
    assert envelope(full, a) == a


def test_envelope_mismatch():
    host = ColoredTree.cyclic(4, 2)
    v = filter_by_sequence(host, (1, 2))[0]
    with pytest.raises(EnvelopeError):
        envelope(v, fs(["0", "11"], host))  # closure colours (1, 2, 1)
    with pytest.raises(EnvelopeError):
        envelope(v, fs(["000"], host))


def test_envelope_lands_inside_v():
    host = ColoredTree.cyclic(5, 2)
    a = fs(["01", "100"], host)  # closure "", "01", "1", "100": lengths 0 1 2 3
    seq = sigma_of(a)
    for v in filter_by_sequence(host, seq)[:40]:
        e = envelope(v, a)
        assert e.nodes <= v.node_set()
        assert em_code(e) == em_code(a)


@pytest.mark.parametrize("h, n", [(h, n) for n in (1, 2) for h in range(1, 5)])
def test_envelope_census_small(h, n):
    c = envelope_census(ColoredTree.cyclic(h, n))
    assert c.ok, c.failures


def test_envelope_census_agrees_with_literal_search():
    host = ColoredTree.cyclic(4, 2)
    rng = random.Random(3)
    sets = [fs(c, host) for k in (1, 2, 3) for c in itertools.combinations(host.nodes(), k)]
    for a in rng.sample(sets, 60):
        for v in filter_by_sequence(host, sigma_of(a)):
            assert len(envelope_candidates(v, a)) == 1


def test_antichain_clauses_fifteen_nodes():
    for n in (1, 2, 3):
        model = build_antichain(n, 15)
        assert model.problems() == []
        assert len(model.entries) == 15


def test_antichain_first_entries():
    m = build_antichain(1, 3)
    assert m.entries == (("", "", "01"), ("0", "000", "00001"), ("1", "100000", "10000001"))
    m = build_antichain(2, 2)
    assert m.entries[1] == ("0", "0000", "0000010")


@pytest.mark.parametrize("n", [1, 2])
def test_antichain_small_subsets_are_devlin(n):
    model = build_antichain(n, 15)
    for k in (1, 2, 3):
        for c in itertools.combinations(model.xs, k):
            assert is_devlin_type(model.subset(c))


@pytest.mark.parametrize("n, size", [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)])
def test_antichain_realizes_every_devlin_type(n, size):
    model = build_antichain(n, 15)
    host = model.host()
    realized = {}
    for c in itertools.combinations(model.xs, size):
        a = model.subset(c)
        realized.setdefault(realized_pattern(a).word, set()).add(em_code(a, "members"))
    for w in itertools.product(range(1, n + 1), repeat=size):
        x = PnStructure(w, n)
        assert realized.get(x.word, set()) == set(count_devlin_types(x).codes)


def test_antichain_problems_detect_breakage():
    good = build_antichain(1, 4)
    f, w, x = good.entries[1]
    broken = AntichainModel(1, (good.entries[0], (f, w, good.entries[0][2] + "1"), *good.entries[2:]))
    assert broken.problems()
