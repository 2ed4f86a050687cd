"""Admitting tuples, maximal subsets, and the minimum feasible horizon."""

import itertools
from fractions import Fraction

from evacflow import (
    check_admits,
    enumerate_admitting_family,
    maximal_admitting_subset,
    min_time_horizon,
    origin_sequence,
)


def brute_family(net):
    """subset -> origin sequence, for every nonempty source subset."""
    out = {}
    for r in range(1, len(net.sources) + 1):
        for combo in itertools.combinations(net.sources, r):
            out[frozenset(combo)] = origin_sequence(net, combo)
    return out


def test_check_admits_d1(d1):
    net, _ = d1
    assert check_admits(net, (1, 0))
    assert check_admits(net, (0, 0))
    assert check_admits(net, (1,))
    assert not check_admits(net, (0, 1))
    assert not check_admits(net, (0,))  # proper prefix is not the sequence


def test_origin_sequences_d1(d1):
    net, _ = d1
    assert origin_sequence(net, (0,)) == (0, 0)
    assert origin_sequence(net, (1,)) == (1,)
    assert origin_sequence(net, (0, 1)) == (1, 0)


def test_family_d1(d1):
    net, w = d1
    family = enumerate_admitting_family(net, w)
    assert family.k == 2 and family.d == 2
    assert family.examined == 6  # k + k^2 ordered tuples
    got = {e.origins: (tuple(sorted(e.subset)), e.theta) for e in family.entries}
    assert got == {
        (1,): ((1,), Fraction(4)),
        (0, 0): ((0,), Fraction(7, 2)),
        (1, 0): ((0, 1), Fraction(9, 2)),
    }
    assert sorted(family.admitted_tuples) == [(0, 0), (1,), (1, 0)]
    # lookup of a non-admitted tuple synthesizes an empty entry
    assert family.lookup((0,)).subset == frozenset()
    assert family.lookup((0,)).theta == 0


def test_maximal_admitting_subset_d1(d1):
    net, w = d1
    assert maximal_admitting_subset(net, (1, 0), w).subset == {0, 1}
    assert maximal_admitting_subset(net, (1, 0), w).theta == Fraction(9, 2)
    assert maximal_admitting_subset(net, (0, 0)).subset == {0}
    assert maximal_admitting_subset(net, (1,)).subset == {1}


def test_min_time_horizon_d1(d1):
    net, w = d1
    t_star, a_star, family = min_time_horizon(net, w)
    assert t_star == Fraction(9, 2)
    assert a_star == {0, 1}
    assert t_star == max(e.theta for e in family.entries)


def test_family_matches_exhaustive_search(corpus):
    for net, w in corpus[:40]:
        if len(net.sources) > 5:
            continue
        brute = brute_family(net)
        family = enumerate_admitting_family(net, w)
        got = {e.origins: e.subset for e in family.entries}
        # each entry's subset is the union of all subsets admitting it
        expected = {}
        for subset, seq in brute.items():
            expected[seq] = expected.get(seq, frozenset()) | subset
        assert got == expected


def test_adding_a_source_breaks_admission(corpus):
    for net, w in corpus[:25]:
        if len(net.sources) > 5:
            continue
        family = enumerate_admitting_family(net, w)
        for entry in family.entries:
            for v in net.sources:
                if v in entry.subset:
                    continue
                grown = tuple(sorted(entry.subset | {v}))
                assert origin_sequence(net, grown) != entry.origins


def test_jobs_do_not_change_the_family(corpus):
    for net, w in corpus[:15]:
        one = enumerate_admitting_family(net, w, jobs=1)
        four = enumerate_admitting_family(net, w, jobs=4)
        assert [(e.origins, e.subset, e.theta) for e in one.entries] == \
               [(e.origins, e.subset, e.theta) for e in four.entries]


def test_horizon_is_max_theta(corpus):
    for net, w in corpus[:40]:
        t_star, a_star, family = min_time_horizon(net, w)
        assert t_star == max(e.theta for e in family.entries)
        matching = [e.subset for e in family.entries if e.theta == t_star]
        assert a_star in matching
