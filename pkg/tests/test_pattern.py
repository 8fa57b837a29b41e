"""Line-pattern generation, pruning, and the position/meet algebra."""

import pytest

from ctagsched.graphs import (
    Mapping,
    clique,
    grid,
    identity_mapping,
    linear,
    make_problem_graph,
    random_initial_mapping,
)
from ctagsched.pattern import (
    CPHASE,
    SWAP,
    Gate,
    ScheduledCircuit,
    cyclic_rank_shift,
    from_json_dict,
    generate_2xn_pattern,
    generate_clique_pattern,
    interaction_ranks,
    meet_cycle,
    pattern_position,
    position_at,
    prune_pattern,
    to_json_dict,
    to_text,
)
from ctagsched.verify import verify

# meet cycles for n=6, keyed by start-position pairs, frozen from a
# cycle-by-cycle scan of the generated pattern
MEET_6 = {
    0: {(0, 1), (2, 3), (4, 5)},
    1: {(1, 2), (3, 4)},
    4: {(0, 2), (1, 4), (3, 5)},
    5: {(0, 4), (1, 5)},
    8: {(2, 4), (0, 5), (1, 3)},
    9: {(2, 5), (0, 3)},
}


def simulate_positions(n: int, circuit: ScheduledCircuit) -> list[dict[int, int]]:
    """Occupancy after each cycle, by replaying the SWaps; site -> logical."""
    occ = {p: l for l, p in enumerate(circuit.init.pi)}
    out = []
    for cyc in circuit.cycles:
        for g in cyc:
            if g.kind == SWAP:
                occ[g.a], occ[g.b] = occ.get(g.b), occ.get(g.a)
        out.append(dict(occ))
    return out


class TestCliquePattern:
    def test_n2(self):
        c = generate_clique_pattern(2)
        assert c.depth == 1
        assert c.cycles == ((Gate(CPHASE, 0, 1, (0, 1)),),)

    def test_n6_counts(self):
        c = generate_clique_pattern(6)
        assert c.depth == 10  # 2n - 2
        assert c.cphase_count == 15

    def test_n7_counts(self):
        c = generate_clique_pattern(7)
        assert c.cphase_count == 21
        assert c.depth <= 12  # 2n - 2

    def test_depth_formula(self):
        assert generate_clique_pattern(2).depth == 1
        for n in range(3, 24):
            assert generate_clique_pattern(n).depth == 2 * n - 2

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 8, 13, 16])
    def test_every_pair_exactly_once(self, n):
        seen = []
        for cyc in generate_clique_pattern(n).cycles:
            for g in cyc:
                if g.kind == CPHASE:
                    seen.append(g.logical)
        assert len(seen) == n * (n - 1) // 2
        assert len(set(seen)) == len(seen)

    @pytest.mark.parametrize("n", [2, 5, 6, 9, 12])
    def test_verifies_against_clique(self, n):
        c = generate_clique_pattern(n)
        assert verify(c, clique(n), linear(n)).ok

    def test_gates_are_nearest_neighbor(self):
        arch = linear(9)
        for cyc in generate_clique_pattern(9).cycles:
            for g in cyc:
                assert arch.coupled(g.a, g.b)

    def test_rejects_n1(self):
        with pytest.raises(ValueError):
            generate_clique_pattern(1)


class TestPrunePattern:
    def test_clique_is_untouched(self):
        full = generate_clique_pattern(6)
        pruned = prune_pattern(clique(6), identity_mapping(6), 6)
        assert pruned.cycles == full.cycles

    def test_empty_graph_is_zero_cycles(self):
        g = make_problem_graph(6, [])
        assert prune_pattern(g, identity_mapping(6), 6).depth == 0

    def test_single_edge(self):
        g = make_problem_graph(6, [(0, 1)])
        c = prune_pattern(g, identity_mapping(6), 6)
        assert c.depth == 1
        assert c.cphase_count == 1 and c.swap_count == 0

    def test_prunes_only_cphases_not_needed(self):
        g = make_problem_graph(6, [(0, 5)])
        c = prune_pattern(g, identity_mapping(6), 6)
        # (0,5) meet at cycle 8, so swaps up to there must survive
        assert c.cphase_count == 1
        assert c.swap_count > 0
        assert verify(c, g, linear(6)).ok

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_pruned_verifies_under_random_init(self, seed):
        g = make_problem_graph(8, [(0, 1), (2, 5), (3, 7), (4, 6), (1, 6)])
        init = random_initial_mapping(8, seed)
        c = prune_pattern(g, init, 8)
        assert verify(c, g, linear(8)).ok

    def test_depth_never_exceeds_full_pattern(self):
        g = make_problem_graph(7, [(0, 3), (1, 2), (5, 6)])
        assert prune_pattern(g, identity_mapping(7), 7).depth <= 12

    def test_rejects_non_surjective_init(self):
        with pytest.raises(ValueError):
            prune_pattern(clique(2), Mapping((0, 2)), 2)

    def test_rejects_undersized_n(self):
        with pytest.raises(ValueError):
            prune_pattern(clique(4), identity_mapping(4), 3)


class TestPositionAlgebra:
    def test_position_at_examples(self):
        assert position_at(8, 2, 1) == 0
        assert position_at(8, 0, 1) == 1
        for n in (4, 7, 10):
            for p in range(n):
                assert position_at(n, p, 0) == p

    def test_position_at_period_n(self):
        for n in (5, 8):
            for p in range(n):
                assert position_at(n, p, n) == p

    def test_position_at_validation(self):
        with pytest.raises(ValueError):
            position_at(6, 6, 1)
        with pytest.raises(ValueError):
            position_at(6, 0, -1)

    @pytest.mark.parametrize("n", [2, 5, 8])
    def test_cyclic_rank_shift_is_single_cycle(self, n):
        perm = cyclic_rank_shift(n)
        assert sorted(perm) == list(range(n))
        p, seen = 0, set()
        for _ in range(n):
            assert p not in seen
            seen.add(p)
            p = perm[p]
        assert len(seen) == n

    @pytest.mark.parametrize("n", [4, 6, 9, 12])
    def test_position_at_matches_simulation(self, n):
        """Closed form vs an explicit replay of the full pattern's swaps."""
        snaps = simulate_positions(n, generate_clique_pattern(n))
        # one outer loop = 4 layers; trailing layers are trimmed (even n) or
        # replaced by the short E0-tail (odd n), so only completed loops count
        full_loops = n // 2 - 1 if n % 2 == 0 else (n - 1) // 2 - 1
        for t in range(1, full_loops + 1):
            occ = snaps[4 * t - 1]
            for site, logical in occ.items():
                assert position_at(n, logical, t) == site

    def test_pattern_position_carries_rank(self):
        pp = pattern_position(6, 1, 0)
        assert pp.pos == 1 and pp.cyclic_rank == 0


class TestMeetCycle:
    def test_examples(self):
        assert meet_cycle(6, 0, 1) == 0
        assert meet_cycle(6, 1, 3) == 8

    def test_frozen_table_n6(self):
        for c, pairs in MEET_6.items():
            for a, b in pairs:
                assert meet_cycle(6, a, b) == c
                assert meet_cycle(6, b, a) == c

    @pytest.mark.parametrize("n", [2, 4, 6, 8, 11])
    def test_table_properties(self, n):
        cycles = [meet_cycle(n, a, b) for a in range(n) for b in range(a + 1, n)]
        assert all(0 <= c < 2 * n - 2 or n == 2 for c in cycles)
        assert len(cycles) == n * (n - 1) // 2

    def test_matches_generated_pattern(self):
        """The table is exactly where CPHASEs land in the generated circuit."""
        n = 8
        for cyc_idx, cyc in enumerate(generate_clique_pattern(n).cycles):
            for g in cyc:
                if g.kind == CPHASE:
                    u, v = g.logical
                    assert meet_cycle(n, u, v) == cyc_idx

    def test_validation(self):
        with pytest.raises(ValueError):
            meet_cycle(6, 2, 2)
        with pytest.raises(ValueError):
            meet_cycle(6, 0, 6)


class TestInteractionRanks:
    @pytest.mark.parametrize("n", [4, 6, 8, 10])
    def test_matches_simulation(self, n):
        """Closed-form partner ranks vs the partners actually executed.

        Harvests, per full outer loop, which rank pairs interact, replaying
        the untrimmed stream through the trimmed circuit's CPHASE records.
        """
        from ctagsched.pattern import _rank_of_start

        rank_of = _rank_of_start(n)
        by_loop: dict[int, dict[int, set[int]]] = {}
        c = generate_clique_pattern(n)
        for cyc_idx, cyc in enumerate(c.cycles):
            t = cyc_idx // 4
            for g in cyc:
                if g.kind != CPHASE:
                    continue
                u, v = g.logical
                ru, rv = rank_of[u], rank_of[v]
                by_loop.setdefault(t, {}).setdefault(ru, set()).add(rv)
                by_loop.setdefault(t, {}).setdefault(rv, set()).add(ru)
        for t, per_rank in by_loop.items():
            full = all(
                4 * t + k < len(c.cycles) for k in range(2)
            )  # both exec layers of loop t present
            if not full:
                continue
            for i, partners in per_rank.items():
                assert partners <= interaction_ranks(n, i, t)

    def test_validation(self):
        with pytest.raises(ValueError):
            interaction_ranks(6, 6, 0)


class Test2xN:
    def test_depth_examples(self):
        assert generate_2xn_pattern(4).depth == 5  # 3*4/2 - 1
        assert generate_2xn_pattern(6).depth == 8  # 3*6/2 - 1
        assert generate_2xn_pattern(7).depth == 10  # 3*(7-1)/2 + 1

    @pytest.mark.parametrize("n", [4, 5, 6, 7, 8, 9, 12, 13])
    def test_verifies_on_grid(self, n):
        cols = (n + 1) // 2
        c = generate_2xn_pattern(n)
        assert verify(c, clique(n), grid(2, cols)).ok

    def test_depth_formula(self):
        for n in range(4, 26, 2):
            assert generate_2xn_pattern(n).depth == 3 * n // 2 - 1
        for n in range(5, 25, 2):
            assert generate_2xn_pattern(n).depth == 3 * (n - 1) // 2 + 1

    def test_beats_line_pattern(self):
        for n in (6, 10, 14):
            assert generate_2xn_pattern(n).depth < generate_clique_pattern(n).depth

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            generate_2xn_pattern(3)


class TestSerialization:
    def test_text_format(self):
        c = prune_pattern(make_problem_graph(6, [(0, 1)]), identity_mapping(6), 6)
        assert to_text(c).strip() == "0: CPHASE(0,1)"

    def test_text_multi_gate_cycle(self):
        txt = to_text(generate_clique_pattern(4))
        first = txt.splitlines()[0]
        assert first.startswith("0:") and "CPHASE" in first

    def test_json_round_trip(self):
        c = generate_clique_pattern(6)
        doc = to_json_dict(c)
        c2 = from_json_dict(doc, linear(6))
        assert c2.cycles == c.cycles
        assert c2.init.pi == c.init.pi

    def test_json_round_trip_pruned(self):
        g = make_problem_graph(7, [(0, 3), (2, 6)])
        c = prune_pattern(g, random_initial_mapping(7, 2), 7)
        assert from_json_dict(to_json_dict(c), linear(7)).cycles == c.cycles

    def test_malformed_json_rejected(self):
        with pytest.raises(ValueError):
            from_json_dict({"cycles": "nope"}, linear(4))

    def test_unknown_gate_kind_rejected(self):
        doc = to_json_dict(generate_clique_pattern(4))
        doc["cycles"][0][0]["kind"] = "iswap"
        with pytest.raises(ValueError):
            from_json_dict(doc, linear(4))
