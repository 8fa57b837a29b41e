"""Problem graphs, architectures, mappings, and their file formats."""

import pytest

from ctagsched.graphs import (
    Architecture,
    GraphFormatError,
    Mapping,
    ProblemGraph,
    clique,
    density,
    grid,
    ibm20,
    ibm27,
    identity_mapping,
    linear,
    load_mapping,
    load_problem_graph,
    make_architecture,
    make_problem_graph,
    random_graph,
    random_initial_mapping,
    save_mapping,
    save_problem_graph,
    shortest_dist,
)

# deterministic output of random_graph(10, 0.5, 1), frozen
RG_10_05_1 = [
    (0, 2), (0, 4), (0, 7), (0, 8), (1, 3), (1, 6), (1, 7), (1, 8),
    (1, 9), (2, 4), (2, 7), (2, 8), (2, 9), (3, 5), (3, 9), (4, 6),
    (5, 6), (5, 7), (5, 9), (6, 8), (7, 8), (7, 9), (8, 9),
]


class TestProblemGraph:
    def test_make_normalizes(self):
        g = make_problem_graph(4, [(2, 1), (0, 3)])
        assert g.edges == frozenset({(1, 2), (0, 3)})

    def test_rejects_duplicate_edge(self):
        with pytest.raises(ValueError):
            make_problem_graph(4, [(2, 1), (1, 2)])

    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            make_problem_graph(3, [(1, 1)])

    def test_rejects_out_of_range_vertex(self):
        with pytest.raises(ValueError):
            make_problem_graph(3, [(0, 3)])

    def test_rejects_nonpositive_n(self):
        with pytest.raises(ValueError):
            make_problem_graph(0, [])

    def test_degree(self):
        g = make_problem_graph(4, [(0, 1), (0, 2), (0, 3)])
        assert g.degree(0) == 3
        assert g.degree(3) == 1

    def test_clique_counts(self):
        g = clique(6)
        assert g.n == 6
        assert len(g.edges) == 15
        assert density(g) == 1.0

    def test_density_empty(self):
        assert density(make_problem_graph(5, [])) == 0.0


class TestRandomGraph:
    def test_exact_edge_count_from_density(self):
        # round(d * n(n-1)/2) edges, exactly
        g = random_graph(10, 0.5, 1)
        assert len(g.edges) == 23  # round(0.5 * 45)
        g = random_graph(50, 0.3, 7)
        assert len(g.edges) == 368  # round(0.3 * 1225)

    def test_frozen_edge_list(self):
        g = random_graph(10, 0.5, 1)
        assert sorted(g.edges) == RG_10_05_1

    def test_determinism(self):
        assert random_graph(20, 0.4, 9).edges == random_graph(20, 0.4, 9).edges

    def test_seed_sensitivity(self):
        assert random_graph(20, 0.4, 9).edges != random_graph(20, 0.4, 10).edges

    def test_density_one_is_clique(self):
        assert random_graph(7, 1.0, 3).edges == clique(7).edges

    def test_rejects_bad_density(self):
        with pytest.raises(ValueError):
            random_graph(5, 1.5, 0)
        with pytest.raises(ValueError):
            random_graph(7, 0.0, 3)  # zero edges is not a workload


class TestArchitecture:
    def test_linear(self):
        a = linear(5)
        assert a.q == 5
        assert a.couplings == frozenset({(0, 1), (1, 2), (2, 3), (3, 4)})
        assert a.coupled(1, 0)
        assert not a.coupled(0, 2)

    def test_grid(self):
        a = grid(2, 3)
        assert a.q == 6
        # row-major ids: 0 1 2 / 3 4 5
        assert (0, 3) in a.couplings and (1, 2) in a.couplings
        assert len(a.couplings) == 7

    def test_ibm20(self):
        a = ibm20()
        assert a.q == 20
        assert len(a.couplings) == 23

    def test_ibm27(self):
        a = ibm27()
        assert a.q == 27
        assert len(a.couplings) == 28

    def test_shortest_dist(self):
        a = grid(3, 3)
        assert shortest_dist(a, 0, 8) == 4
        assert shortest_dist(a, 4, 4) == 0
        assert shortest_dist(a, 0, 1) == 1

    def test_disconnected_raises(self):
        with pytest.raises(ValueError):
            Architecture(4, frozenset({(0, 1), (2, 3)}), "bad")

    def test_adj(self):
        a = linear(4)
        assert a.adj[0] == (1,)
        assert a.adj[1] == (0, 2)


class TestMakeArchitecture:
    def test_specs(self):
        assert make_architecture("linear:7").q == 7
        assert make_architecture("grid:3x4").q == 12
        assert make_architecture("ibm20").name == "ibm20"
        assert make_architecture("ibm27").name == "ibm27"

    def test_file_spec(self, tmp_path):
        p = tmp_path / "dev.arch"
        p.write_text("3 2\n0 1\n1 2\n")
        a = make_architecture(f"file:{p}")
        assert a.q == 3 and a.coupled(0, 1) and a.coupled(1, 2)

    def test_unknown_spec(self):
        with pytest.raises(ValueError):
            make_architecture("torus:3x3")

    def test_bad_linear_size(self):
        with pytest.raises(ValueError):
            make_architecture("linear:0")

    def test_bad_file_line_is_reported(self, tmp_path):
        p = tmp_path / "dev.arch"
        p.write_text("3 2\n0 1\nbogus line extra\n")
        with pytest.raises(GraphFormatError) as ei:
            make_architecture(f"file:{p}")
        assert ei.value.line == 3
        assert "line 3" in str(ei.value)


class TestGraphIO:
    def test_round_trip(self, tmp_path):
        g = random_graph(12, 0.4, 5)
        p = tmp_path / "g.graph"
        save_problem_graph(g, p)
        assert load_problem_graph(p).edges == g.edges

    def test_comments_and_blanks_ignored(self, tmp_path):
        p = tmp_path / "g.graph"
        p.write_text("# a comment\n3 2\n\n0 1\n# another\n1 2\n")
        g = load_problem_graph(p)
        assert g.n == 3 and g.edges == frozenset({(0, 1), (1, 2)})

    def test_malformed_line_number(self, tmp_path):
        p = tmp_path / "g.graph"
        p.write_text("4 2\n0 1\n0 one\n")
        with pytest.raises(GraphFormatError) as ei:
            load_problem_graph(p)
        assert ei.value.line == 3

    def test_edge_count_mismatch(self, tmp_path):
        p = tmp_path / "g.graph"
        p.write_text("4 3\n0 1\n")
        with pytest.raises(GraphFormatError):
            load_problem_graph(p)

    def test_empty_file(self, tmp_path):
        p = tmp_path / "g.graph"
        p.write_text("")
        with pytest.raises(GraphFormatError):
            load_problem_graph(p)


class TestMapping:
    def test_identity(self):
        m = identity_mapping(4)
        assert m.pi == (0, 1, 2, 3)
        assert m[2] == 2

    def test_injectivity_enforced(self):
        with pytest.raises(ValueError):
            Mapping((0, 0, 1))

    def test_codomain_may_exceed_n(self):
        # physical placements use site ids above n-1
        m = Mapping((5, 0, 9))
        assert m[2] == 9
        assert m.inverse() == {5: 0, 0: 1, 9: 2}

    def test_random_initial_mapping_is_permutation(self):
        m = random_initial_mapping(8, 3)
        assert sorted(m.pi) == list(range(8))

    def test_random_initial_mapping_deterministic(self):
        assert random_initial_mapping(8, 3).pi == random_initial_mapping(8, 3).pi
        assert random_initial_mapping(8, 3).pi != random_initial_mapping(8, 4).pi

    def test_mapping_io(self, tmp_path):
        m = random_initial_mapping(6, 1)
        p = tmp_path / "m.map"
        save_mapping(m, p)
        assert load_mapping(p).pi == m.pi
