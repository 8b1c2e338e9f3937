import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import all_words, popcount_words
from rlsc.automata import (
    complement_dagdfa,
    complement_dfa,
    count_words,
    minimize_dagdfa,
    minimize_dfa,
    unroll_dfa,
)
from rlsc.automaton import BINARY, DagDfa, Dfa
from rlsc.errors import EmptyComplementError, EmptyLanguageError
from rlsc.families import dicke_regex, dicke_words
from rlsc.frontend import regex_to_dfa, strings_to_dagdfa
from rlsc.verify import enumerate_language

F1 = "0*10*"


def test_single_one_minimizes_to_two_states():
    dfa, report = minimize_dfa(regex_to_dfa(F1))
    assert dfa.n_states == 2
    assert report.states_after == 2 and report.states_before >= 2


def test_redundant_encoding_minimizes():
    # two interchangeable copies of the 'before the one' state
    table = np.array([[1, 2], [0, 2], [2, -1]])
    dfa = Dfa(BINARY, table, 0, frozenset([2]))
    small, _ = minimize_dfa(dfa)
    assert small.n_states == 2
    assert all(small.accepts(w) == (w.count("1") == 1) for n in range(7) for w in all_words(n))


def test_weight_three_has_four_states():
    dfa, _ = minimize_dfa(regex_to_dfa(dicke_regex(3)))
    assert dfa.n_states == 4


def test_minimize_is_idempotent():
    dfa, _ = minimize_dfa(regex_to_dfa("(0|1)*1(0|1)"))
    again, report = minimize_dfa(dfa)
    assert again.same_as(dfa)
    assert report.states_before == report.states_after


def test_dag_minimization_examples():
    w, _ = minimize_dagdfa(strings_to_dagdfa(["100", "010", "001"]))
    assert w.width == 2
    dicke, _ = minimize_dagdfa(strings_to_dagdfa(dicke_words(6, 2)))
    assert dicke.width == 3
    single = strings_to_dagdfa(["0110"])
    assert minimize_dagdfa(single)[0].same_as(single)
    full, _ = minimize_dagdfa(strings_to_dagdfa(all_words(3)))
    assert full.layer_sizes == (1, 1, 1, 1)


def test_complement_dag_of_w():
    w, _ = minimize_dagdfa(strings_to_dagdfa(["100", "010", "001"]))
    comp = complement_dagdfa(w)
    assert enumerate_language(comp) == set(all_words(3)) - {"100", "010", "001"}
    assert comp.width == 3
    assert count_words(comp) == 5


def test_complement_dag_single_word():
    comp = complement_dagdfa(strings_to_dagdfa(["000"]))
    assert enumerate_language(comp) == set(all_words(3)) - {"000"}


def test_complement_dag_of_full_language_fails():
    with pytest.raises(EmptyComplementError):
        complement_dagdfa(strings_to_dagdfa(all_words(3)))


def test_complement_dfa_examples():
    f1, _ = minimize_dfa(regex_to_dfa(F1))
    comp = complement_dfa(f1)
    assert comp.n_states == 3
    assert all(comp.accepts(w) != (w.count("1") == 1) for n in range(6) for w in all_words(n))
    assert complement_dfa(comp).same_as(f1)
    nothing = complement_dfa(minimize_dfa(regex_to_dfa("(0|1)*"))[0])
    assert not nothing.accepting


def test_unroll_examples():
    f1, _ = minimize_dfa(regex_to_dfa(F1))
    dag = unroll_dfa(f1, 3)
    assert minimize_dagdfa(dag)[0].same_as(minimize_dagdfa(strings_to_dagdfa(["100", "010", "001"]))[0])
    full = unroll_dfa(minimize_dfa(regex_to_dfa("(0|1)*"))[0], 5)
    assert full.layer_sizes == (1,) * 6
    with pytest.raises(EmptyLanguageError):
        unroll_dfa(minimize_dfa(regex_to_dfa(dicke_regex(3)))[0], 2)


def test_unroll_width_bound():
    dfa = regex_to_dfa("(0|1)*1(0|1)(0|1)")
    assert unroll_dfa(dfa, 8).width <= dfa.n_states


def test_count_words_examples():
    assert count_words(unroll_dfa(regex_to_dfa(dicke_regex(3)), 4)) == 4
    assert count_words(strings_to_dagdfa(["100", "010", "001"])) == 3


def test_count_words_arbitrary_precision():
    full = unroll_dfa(regex_to_dfa("(0|1)*"), 100)
    assert count_words(full) == 2**100
    assert count_words(unroll_dfa(regex_to_dfa(dicke_regex(3)), 80)) == 80 * 79 * 78 // 6


def test_dag_json_round_trip():
    dag = strings_to_dagdfa(["0110", "1001", "1111"])
    assert DagDfa.from_json(dag.to_json()).same_as(dag)


word_sets = st.integers(2, 8).flatmap(
    lambda n: st.sets(st.text("01", min_size=n, max_size=n), min_size=1, max_size=2**n)
)


@settings(max_examples=60, deadline=None)
@given(word_sets)
def test_dag_passes_preserve_languages(words):
    n = len(next(iter(words)))
    dag = strings_to_dagdfa(words)
    small, report = minimize_dagdfa(dag)
    assert enumerate_language(small) == words
    assert minimize_dagdfa(small)[0].same_as(small)
    assert report.d_min <= report.d_init
    assert count_words(small) == len(words)
    if len(words) < 2**n:
        comp = complement_dagdfa(small)
        assert enumerate_language(comp) == set(all_words(n)) - words
        assert comp.width <= small.width + 1


regexes = st.sampled_from(
    [F1, "0*|1*", dicke_regex(2), dicke_regex(3), "(0|1)*11(0|1)*", "(01|10)*", "(0|1)*1(0|1)(0|1)", "1*0*"]
)


@settings(max_examples=30, deadline=None)
@given(regexes, st.integers(1, 10))
def test_dfa_passes_preserve_languages(text, n):
    dfa = regex_to_dfa(text)
    small, _ = minimize_dfa(dfa)
    assert minimize_dfa(small)[0].same_as(small)
    assert enumerate_language(small, n) == enumerate_language(dfa, n)
    comp = complement_dfa(small)
    assert comp.n_states <= small.n_states + 1
    assert enumerate_language(comp, n) == set(all_words(n)) - enumerate_language(dfa, n)
    try:
        dag = unroll_dfa(small, n)
    except EmptyLanguageError:
        assert not enumerate_language(dfa, n)
        return
    assert enumerate_language(dag) == enumerate_language(dfa, n)
    assert count_words(dag) == len(enumerate_language(dfa, n))


@pytest.mark.parametrize("k", range(1, 7))
def test_dicke_width(k):
    for n in range(2 * k, 17):
        dag, _ = minimize_dagdfa(strings_to_dagdfa(dicke_words(n, k)))
        assert dag.width == k + 1
        assert enumerate_language(dag) == popcount_words(n, k) if n <= 10 else True
