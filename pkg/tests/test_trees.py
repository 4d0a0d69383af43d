"""Tree enumeration, criticality analysis, and scan machinery."""

import json

import pytest

from domgame import Graph, VertexSet, build_path, build_spider, parse_graph6
from domgame._fastscan import FastScanner
from domgame.lemmas import Classification, classify
from domgame.solver import GameConfig, GameSolver, Turn
from domgame.trees import (
    CriticalityReport,
    ResumeError,
    ScanCheckpoint,
    analyze,
    enumerate_free_trees,
    level_sequences,
    scan_critical_trees,
    tree_from_level_sequence,
    verify_spider,
)

from bruteforce import free_tree_classes, game_value, tree_canon, unlabeled_tree_counts

_D = GameConfig(Turn.DOMINATOR)


def canon(g: Graph):
    return tree_canon(g.order, list(g.edges()))


# --- enumeration -------------------------------------------------------------


def test_smallest_orders():
    assert list(level_sequences(1)) == [[0]]
    assert list(level_sequences(2)) == [[0, 1]]
    assert list(level_sequences(3)) == [[0, 1, 1]]
    assert list(level_sequences(4)) == [[0, 1, 2, 1], [0, 1, 1, 1]]


def test_order_bounds():
    with pytest.raises(ValueError):
        list(level_sequences(0))
    with pytest.raises(ValueError):
        list(level_sequences(65))


def test_counts_match_recurrence_oracle():
    expected = unlabeled_tree_counts(16)
    # recurrence itself is pinned by the exhaustive Prufer oracle first
    for n in range(1, 8):
        assert expected[n] == len(free_tree_classes(n))
    for n in range(1, 17):
        assert sum(1 for _ in level_sequences(n)) == expected[n]


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_class_sets_match_prufer_oracle(n):
    mine = [canon(g) for g in enumerate_free_trees(n)]
    assert len(set(mine)) == len(mine)
    assert set(mine) == set(free_tree_classes(n))


def test_class_set_matches_prufer_oracle_n9():
    # exhaustive 9^7 labeled-tree sweep; the slowest oracle comparison
    mine = [canon(g) for g in enumerate_free_trees(9)]
    assert len(set(mine)) == len(mine) == 47
    assert set(mine) == set(free_tree_classes(9))


def test_emitted_graphs_are_trees():
    for n in range(1, 11):
        for g in enumerate_free_trees(n):
            assert g.order == n and g.is_tree()


def test_matches_plain_successor_reference():
    # reference path: no jumps, every canonical rooted sequence is visited
    # and filtered; must agree with the jumping generator exactly
    from domgame.trees import _is_free_canonical, _rooted_successor

    def reference(n):
        if n == 1:
            yield [0]
            return
        seq = list(range(n // 2 + 1)) + list(range(1, (n + 1) // 2))
        while seq is not None:
            if _is_free_canonical(seq):
                yield seq
            seq = _rooted_successor(seq)

    for n in range(2, 12):
        assert list(level_sequences(n)) == list(reference(n))


def test_deterministic_order():
    a = [tuple(s) for s in level_sequences(10)]
    b = [tuple(s) for s in level_sequences(10)]
    assert a == b


def test_resume_is_exact_suffix():
    seqs = list(level_sequences(8))
    for k in (0, 1, 10, len(seqs) - 2, len(seqs) - 1):
        assert list(level_sequences(8, resume_after=seqs[k])) == seqs[k + 1 :]
    assert list(level_sequences(1, resume_after=[0])) == []
    with pytest.raises(ResumeError):
        list(level_sequences(8, resume_after=[0, 1]))


def test_tree_from_level_sequence():
    g = tree_from_level_sequence([0, 1, 2, 1, 2])
    assert g.order == 5 and g.is_tree()
    assert set(g.edges()) == {(0, 1), (1, 2), (0, 3), (3, 4)}
    with pytest.raises(ValueError):
        tree_from_level_sequence([1, 2])
    with pytest.raises(ValueError):
        tree_from_level_sequence([0, 1, 3])
    with pytest.raises(ValueError):
        tree_from_level_sequence([])


# --- analyze -----------------------------------------------------------------


def test_analyze_spider():
    report = analyze(build_spider(1, 1, 1))
    assert report.gamma_g == 7
    assert report.gamma_g_prime == 7
    assert report.is_critical
    assert report.classification is Classification.EQUAL
    assert report.order == 13
    assert parse_graph6(report.graph_g6).is_tree()


def test_analyze_path4_against_oracle():
    g = build_path(4)
    edges = list(g.edges())
    report = analyze(g)
    expected = tuple(game_value(4, edges, dominated=(v,)) for v in range(4))
    assert report.per_vertex == expected
    assert report.gamma_g == game_value(4, edges)
    assert report.is_critical == all(x < report.gamma_g for x in expected)
    assert not report.is_critical


def test_analyze_singleton():
    report = analyze(Graph.from_edges(1, []))
    assert report.gamma_g == 1
    assert report.per_vertex == (0,)
    assert report.is_critical
    assert report.classification is Classification.EQUAL


def test_analyze_bounds_on_all_small_trees():
    for n in range(1, 9):
        for g in enumerate_free_trees(n):
            report = analyze(g)
            assert report.classification is classify(g)
            assert parse_graph6(report.graph_g6) == g
            for x in report.per_vertex:
                assert x <= report.gamma_g  # predomination cannot hurt
                assert x >= report.gamma_g - 1  # forests are no-minus


def test_report_dict_round_trip():
    report = analyze(build_spider(1, 1, 1))
    d = report.to_dict()
    assert CriticalityReport.from_dict(json.loads(json.dumps(d))) == report


# --- spider verdicts ---------------------------------------------------------


def test_verify_spider_base_case():
    v = verify_spider(1, 1, 1)
    assert v.passed
    assert v.gamma_g == 7 and v.gamma_g_prime == 7
    assert v.expected_value == 7
    assert v.is_critical
    assert v.order == 13


def test_verify_spider_112():
    v = verify_spider(1, 1, 2)
    assert v.gamma_g == 9 and v.passed


def test_verify_spider_symmetry():
    a = verify_spider(2, 1, 1)
    b = verify_spider(1, 1, 2)
    keys = ("order", "expected_value", "gamma_g", "gamma_g_prime", "is_critical", "passed")
    assert {k: getattr(a, k) for k in keys} == {k: getattr(b, k) for k in keys}


def test_verify_spider_rejects_degenerate_legs():
    with pytest.raises(ValueError):
        verify_spider(0, 1, 1)
    with pytest.raises(ValueError):
        verify_spider(1, 1, 0)


# --- fast kernel vs reference solver ------------------------------------------


def test_kernel_matches_reference_on_all_small_trees():
    scanner = FastScanner(10).warmup()
    for n in range(1, 11):
        for g in enumerate_free_trees(n):
            bits = [ns.bits for ns in g.closed_nbhd]
            solver = GameSolver(g)
            gg, ggp = scanner.game_values(bits)
            assert gg == solver.value(VertexSet(0), _D)
            assert ggp == solver.value(VertexSet(0), GameConfig(Turn.STALLER))
            base, refuter = scanner.criticality(bits)
            report = analyze(g, solver)
            assert base == report.gamma_g
            assert (refuter is None) == report.is_critical
            if refuter is not None:
                assert report.per_vertex[refuter] == report.gamma_g


def test_kernel_trial_order_does_not_change_verdict():
    scanner = FastScanner(9)
    for g in enumerate_free_trees(9):
        bits = [ns.bits for ns in g.closed_nbhd]
        base_a, ref_a = scanner.criticality(bits)
        base_b, ref_b = scanner.criticality(bits, list(reversed(range(9))))
        assert base_a == base_b
        assert (ref_a is None) == (ref_b is None)


# 10-vertex graph where pre-dominating vertex 3 drops gamma_g by 2 (5 -> 3);
# frozen from a seeded search, both values confirmed by the brute-force oracle
MINUS_WITNESS_G6 = "ItCH?GCO_"


def test_probe_drop_bound_raises_on_minus_vertex():
    g = parse_graph6(MINUS_WITNESS_G6)
    bits = [ns.bits for ns in g.closed_nbhd]
    for kernel in (True, False):
        scanner = FastScanner(10)
        scanner.kernel = scanner.kernel and kernel
        base, refuter = scanner.criticality(bits)  # drop 2 is fine in general
        assert (base, refuter) == (5, 4)
        with pytest.raises(RuntimeError, match="outside"):
            scanner.criticality(bits, max_drop=1)


def test_minus_witness_values_match_bruteforce():
    g = parse_graph6(MINUS_WITNESS_G6)
    edges = list(g.edges())
    assert game_value(g.order, edges) == 5
    assert game_value(g.order, edges, dominated=(3,)) == 3


# --- scanning ----------------------------------------------------------------


def test_scan_small_orders_have_no_critical_trees():
    for n in range(2, 10):
        res = scan_critical_trees(n)
        assert res.complete
        assert res.critical_count == 0 and res.reports == []
    assert scan_critical_trees(9).trees_scanned == 47


def test_scan_singleton_is_the_vacuous_critical_tree():
    # the one-vertex tree satisfies the criticality definition outright;
    # census tables conventionally start above it
    res = scan_critical_trees(1)
    assert res.complete and res.trees_scanned == 1
    assert res.critical_count == 1
    assert res.reports[0] == analyze(Graph.from_edges(1, []))


def test_scan_kernel_off_matches_kernel_on():
    fast = scan_critical_trees(8)
    pure = scan_critical_trees(8, use_fast_kernel=False)
    assert fast.trees_scanned == pure.trees_scanned == 23
    assert fast.critical_count == pure.critical_count
    assert [r.graph_g6 for r in fast.reports] == [r.graph_g6 for r in pure.reports]


def test_scan_rejects_bad_arguments():
    with pytest.raises(ValueError):
        scan_critical_trees(0)
    with pytest.raises(ValueError):
        scan_critical_trees(25)
    with pytest.raises(ValueError):
        scan_critical_trees(5, jobs=0)


def test_scan_streams_reports_in_discovery_order():
    seen = []
    res = scan_critical_trees(1, on_report=seen.append)
    assert seen == res.reports


def test_checkpoint_round_trip(tmp_path):
    path = tmp_path / "cp.json"
    cp = ScanCheckpoint(order=9, generator_cursor=[0, 1, 2, 1, 1, 1, 1, 1, 1],
                        trees_scanned=12, reports_emitted=0)
    cp.save(path)
    assert ScanCheckpoint.load(path) == cp


def test_checkpoint_rejects_corruption(tmp_path):
    path = tmp_path / "cp.json"
    path.write_text("{not json")
    with pytest.raises(ResumeError):
        ScanCheckpoint.load(path)
    path.write_text(json.dumps({"schema_version": 99}))
    with pytest.raises(ResumeError):
        ScanCheckpoint.load(path)
    good = ScanCheckpoint(order=5, generator_cursor=[0, 1, 2, 1, 1]).to_dict()
    for broken in (
        {**good, "order": 0},
        {**good, "generator_cursor": [1, 2, 3, 4, 5]},
        {**good, "generator_cursor": [0, 1, 3, 1, 1]},
        {**good, "generator_cursor": [0, 1]},
        {**good, "trees_scanned": -1},
        {**good, "reports_emitted": "2"},
    ):
        path.write_text(json.dumps(broken))
        with pytest.raises(ResumeError):
            ScanCheckpoint.load(path)
    with pytest.raises(ResumeError):
        ScanCheckpoint.load(tmp_path / "missing.json")


def test_scan_rejects_mismatched_checkpoint():
    cp = ScanCheckpoint(order=8, generator_cursor=None)
    with pytest.raises(ResumeError):
        scan_critical_trees(9, cp)


def test_scan_budget_and_resume(tmp_path):
    path = tmp_path / "cp.json"
    full = scan_critical_trees(9)
    merged = []
    res = scan_critical_trees(9, budget=0.0, checkpoint_path=path, checkpoint_interval=10)
    assert not res.complete and 0 < res.trees_scanned < 47
    merged += res.reports
    rounds = 1
    while not res.complete:
        cp = ScanCheckpoint.load(path)
        res = scan_critical_trees(9, cp, budget=0.0, checkpoint_path=path,
                                  checkpoint_interval=10)
        merged += res.reports
        rounds += 1
        assert rounds < 50
    assert res.trees_scanned == full.trees_scanned == 47
    assert res.critical_count == full.critical_count
    assert sorted(r.graph_g6 for r in merged) == [r.graph_g6 for r in full.reports]
    final = ScanCheckpoint.load(path)
    assert final.finished
    again = scan_critical_trees(9, final)
    assert again.complete and again.trees_scanned == 47 and again.reports == []


def test_scan_with_jobs_matches_single_process():
    one = scan_critical_trees(9)
    two = scan_critical_trees(9, jobs=2)
    assert (one.trees_scanned, one.critical_count) == (two.trees_scanned, two.critical_count)
    assert [r.graph_g6 for r in one.reports] == [r.graph_g6 for r in two.reports]
    assert two.complete
