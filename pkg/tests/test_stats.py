import dataclasses

import pytest

from gtst.bench import store_workload
from gtst.stats import MemoryReport, oracle_counts, snapshot, table2_gt_nodes, table2_gt_ratio_limit
from gtst.table_space import DESIGNS, TableSpace
from gtst.terms import Var, parse_term
from gtst.workloads import Query, gen_table1, gen_table2


def two_call_queries(a, b):
    A, B = parse_term(a), parse_term(b)
    return [
        Query("t", (A, Var("Y")), [(A,), (B,)]),
        Query("t", (Var("X"), Var("Y")), [(x, y) for x in (A, B) for y in (A, B)]),
    ]


def stored(design, queries):
    space = TableSpace(design)
    for q in queries:
        sf, _ = space.call(q.predicate, *q.args)
        for subs in q.answers:
            space.answer_check_insert(sf, subs)
    return space


def test_empty_snapshot():
    m = snapshot(TableSpace("gt-st"))
    assert m == MemoryReport() and m.bytes_total == 0


def test_two_calls_original_snapshot():
    m = snapshot(stored("original", two_call_queries("f(1)", "f(2)")))
    assert (m.nodes_subgoal, m.nodes_answer, m.nodes_gt) == (5, 12, 0)


def test_two_calls_gtst_snapshot():
    m = snapshot(stored("gt-st", two_call_queries("f(g(1),g(1))", "f(g(2),g(2))")))
    assert m.nodes_gt == 8


@pytest.mark.parametrize("design", DESIGNS)
@pytest.mark.parametrize("pair", [("f(1)", "f(2)"), ("f(g(1),g(1))", "f(g(2),g(2))")])
def test_oracle_matches_two_calls(design, pair):
    qs = two_call_queries(*pair)
    want = oracle_counts(qs, design)
    assert not want.mismatches(snapshot(stored(design, qs)))


def test_bytes_model():
    m = MemoryReport(nodes_subgoal=3, nodes_answer=10, nodes_gt=7, hash_buckets=8, word_bytes=8)
    assert m.bytes_total == 3 * 4 * 8 + 10 * 5 * 8 + 7 * 4 * 8 + 8 * 8
    assert m.bytes_by_category["answer"] == 400
    doubled = dataclasses.replace(
        m, nodes_subgoal=6, nodes_answer=20, nodes_gt=14, hash_buckets=16
    )
    assert doubled.bytes_total == 2 * m.bytes_total
    assert dataclasses.replace(m, word_bytes=4).bytes_total * 2 == m.bytes_total


def test_bytes_scale_with_workload():
    reports = []
    for n in (40, 80):
        space = TableSpace("original")
        store_workload(space, gen_table1("int", n))
        reports.append(snapshot(space))
    small, big = reports
    twice = MemoryReport(
        2 * small.nodes_subgoal, 2 * small.nodes_answer, 2 * small.nodes_gt, 2 * small.hash_buckets
    )
    assert twice.bytes_total == 2 * small.bytes_total
    assert big.bytes_total > small.bytes_total


@pytest.mark.parametrize("design, per_term", [("gt-st", 5), ("gt-t", 7)])
def test_table2_closed_form_against_enumeration(design, per_term):
    w = gen_table2(2, 3, 10)
    assert oracle_counts(w.queries, design).nodes_gt == 2 + per_term * 10 == table2_gt_nodes(2, 3, 10, design)
    space = TableSpace(design)
    store_workload(space, w)
    assert snapshot(space).nodes_gt == 2 + per_term * 10


@pytest.mark.parametrize("a", [1, 2, 3])
@pytest.mark.parametrize("b", [1, 3, 5])
def test_table2_closed_form_all_cells(a, b):
    for n in (1, 7):
        w = gen_table2(a, b, n)
        for design in ("gt-t", "gt-st"):
            assert oracle_counts(w.queries, design).nodes_gt == table2_gt_nodes(a, b, n, design)


def test_table2_ratio_limit():
    assert round(table2_gt_ratio_limit(2, 3), 2) == 0.71
    assert table2_gt_ratio_limit(1, 1) == 2.0
    with pytest.raises(ValueError):
        table2_gt_nodes(1, 1, 1, "original")


@pytest.mark.parametrize("kind", ["f/2", "list2"])
def test_gt_modes_agree_on_flat_terms(kind):
    w = gen_table1(kind, 12)
    assert oracle_counts(w.queries, "gt-t") == oracle_counts(w.queries, "gt-st")


def test_oracle_rejects_unknown_design():
    with pytest.raises(ValueError):
        oracle_counts([], "other")
