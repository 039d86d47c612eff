import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corruptmatch.errors import EmptyDomainError, ParameterError, SchemaError
from corruptmatch.graphs import (
    Graph,
    Matching,
    Permutation,
    apply_permutation,
    intersection_edge_count,
    intersection_graph,
    matching_from_json,
    matching_to_json,
    overlap,
    precision,
    read_edgelist,
    sample_cer,
    sample_er,
    write_edgelist,
)
from corruptmatch.rng import make_rng


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


class TestGraph:
    def test_rejects_self_loop(self):
        adj = np.zeros((3, 3), dtype=bool)
        adj[1, 1] = True
        with pytest.raises(ParameterError):
            Graph.from_dense(adj)

    def test_rejects_asymmetric(self):
        adj = np.zeros((3, 3), dtype=bool)
        adj[0, 1] = True
        with pytest.raises(ParameterError):
            Graph.from_dense(adj)

    def test_edge_count_is_half_degree_sum(self, rng):
        g = sample_er(40, 0.3, rng)
        assert g.edge_count * 2 == int(g.degrees().sum())

    def test_has_edge_matches_dense(self, rng):
        g = sample_er(20, 0.4, rng)
        dense = g.dense()
        for i in range(20):
            for j in range(20):
                assert g.has_edge(i, j) == (dense[i, j] and i != j)

    def test_edges_sorted_lexicographically(self, rng):
        g = sample_er(15, 0.5, rng)
        e = g.edges().tolist()
        assert e == sorted(e)
        assert all(i < j for i, j in e)


class TestSampleEr:
    def test_zero_probability_gives_empty_graph(self, rng):
        assert sample_er(5, 0.0, rng).edge_count == 0

    def test_certainty_gives_complete_graph(self, rng):
        assert sample_er(5, 1.0, rng).edge_count == 10

    def test_invalid_probability_rejected(self, rng):
        with pytest.raises(ParameterError):
            sample_er(5, 1.2, rng)
        with pytest.raises(ParameterError):
            sample_er(5, -0.1, rng)
        with pytest.raises(ParameterError):
            sample_er(0, 0.5, rng)

    def test_mean_edge_count_matches_binomial(self, rng):
        # mean of Bin(C(200,2), 1/2) over 500 samples, 4-SE band
        n, p, reps = 200, 0.5, 500
        pairs = n * (n - 1) // 2
        counts = [sample_er(n, p, rng).edge_count for _ in range(reps)]
        se = math.sqrt(pairs * p * (1 - p)) / math.sqrt(reps)
        assert abs(np.mean(counts) - pairs * p) <= 4 * se

    def test_fixed_node_degree_matches_binomial(self, rng):
        n, p, reps = 50, 0.3, 2000
        degs = [int(sample_er(n, p, rng).degrees()[0]) for _ in range(reps)]
        se = math.sqrt((n - 1) * p * (1 - p)) / math.sqrt(reps)
        assert abs(np.mean(degs) - (n - 1) * p) <= 4 * se


class TestSampleCer:
    def test_zero_subsampling_gives_empty_graphs(self, rng):
        pair = sample_cer(30, 0.8, 0.0, rng)
        assert pair.g1.edge_count == 0 and pair.g2.edge_count == 0

    def test_full_retention_gives_isomorphic_copies(self, rng):
        pair = sample_cer(30, 0.4, 1.0, rng)
        assert apply_permutation(pair.g2, pair.pi_star.inverse()) == pair.g1
        assert pair.g1.edge_count == pair.g2.edge_count

    def test_joint_edge_probability(self, rng):
        # P(both graphs keep a pair, through the latent map) = p * s^2
        n, p, s, reps = 100, 0.3, 0.7, 1000
        pairs = n * (n - 1) // 2
        hits = 0
        for _ in range(reps):
            pr = sample_cer(n, p, s, rng)
            img = pr.pi_star.images
            joint = pr.g1.dense() & pr.g2.dense()[np.ix_(img, img)]
            hits += int(joint.sum()) // 2
        q = p * s * s
        se = math.sqrt(q * (1 - q) / (reps * pairs))
        assert abs(hits / (reps * pairs) - q) <= 4 * se

    def test_marginal_edge_probability(self, rng):
        n, p, s, reps = 100, 0.3, 0.7, 300
        pairs = n * (n - 1) // 2
        total = sum(sample_cer(n, p, s, rng).g1.edge_count for _ in range(reps))
        q = p * s
        se = math.sqrt(q * (1 - q) / (reps * pairs))
        assert abs(total / (reps * pairs) - q) <= 4 * se


class TestApplyPermutation:
    def test_identity_is_noop(self, rng):
        g = sample_er(12, 0.4, rng)
        assert apply_permutation(g, Permutation.identity(12)) == g

    def test_inverse_round_trip(self, rng):
        g = sample_er(12, 0.4, rng)
        pi = Permutation.random(12, rng)
        assert apply_permutation(apply_permutation(g, pi), pi.inverse()) == g

    def test_star_relabeling(self):
        star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        swapped = apply_permutation(star, Permutation([1, 0, 2, 3]))
        assert swapped == Graph.from_edges(4, [(1, 0), (1, 2), (1, 3)])

    def test_defining_identity(self, rng):
        g = sample_er(9, 0.5, rng)
        pi = Permutation.random(9, rng)
        gp = apply_permutation(g, pi)
        for i in range(9):
            for j in range(9):
                if i != j:
                    assert gp.has_edge(pi(i), pi(j)) == g.has_edge(i, j)


class TestIntersectionGraph:
    def test_identity_on_same_graph_is_the_graph(self, rng):
        g = sample_er(10, 0.5, rng)
        ig = intersection_graph(g, g, Permutation.identity(10))
        assert ig.graph == g

    def test_empty_second_graph(self, rng):
        g = sample_er(6, 0.8, rng)
        ig = intersection_graph(g, Graph.empty(6), Permutation.identity(6))
        assert ig.edge_count == 0

    def test_path_reversed_onto_itself(self):
        p3 = path_graph(3)
        mu = Matching.from_pairs([(0, 2), (1, 1), (2, 0)])
        ig = intersection_graph(p3, p3, mu)
        assert ig.edge_count == 2
        assert ig.has_edge(0, 1) and ig.has_edge(1, 2) and not ig.has_edge(0, 2)

    def test_image_out_of_range_rejected(self):
        g = Graph.empty(4)
        with pytest.raises(ParameterError):
            intersection_graph(g, Graph.empty(3), Matching.from_pairs([(0, 3)]))

    def test_role_swap_symmetry(self, rng):
        # |E(h1 /\_mu h2)| = |E(h2 /\_mu^-1 h1)| for total bijections
        for _ in range(20):
            h1, h2 = sample_er(8, 0.5, rng), sample_er(8, 0.5, rng)
            mu = Permutation.random(8, rng)
            assert intersection_edge_count(h1, h2, mu) == intersection_edge_count(
                h2, h1, mu.inverse()
            )

    def test_packed_and_dense_routes_agree(self, rng):
        for _ in range(20):
            h1, h2 = sample_er(9, 0.4, rng), sample_er(9, 0.6, rng)
            mu = Permutation.random(9, rng)
            assert intersection_edge_count(h1, h2, mu) == intersection_graph(
                h1, h2, mu
            ).edge_count


class TestOverlapPrecision:
    def test_full_agreement(self, rng):
        pi = Permutation.random(7, rng)
        assert overlap(pi, pi) == 7
        assert precision(pi, pi) == 1.0

    def test_empty_domain_overlap_is_zero(self, rng):
        assert overlap(Matching.empty(), Permutation.random(5, rng)) == 0

    def test_empty_domain_precision_is_an_error(self, rng):
        with pytest.raises(EmptyDomainError):
            precision(Matching.empty(), Permutation.random(5, rng))

    def test_hand_example(self):
        pi = Permutation([1, 0, 3, 2])
        mu = Matching.from_pairs([(0, 1), (2, 2)])
        assert overlap(mu, pi) == 1
        assert precision(mu, pi) == 0.5

    def test_everywhere_wrong(self):
        pi = Permutation.identity(4)
        mu = Matching.from_pairs([(0, 1), (1, 2), (2, 3), (3, 0)])
        assert precision(mu, pi) == 0.0

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_overlap_bounded_by_domain(self, data):
        n = data.draw(st.integers(2, 10))
        images = data.draw(st.permutations(range(n)))
        dom = sorted(data.draw(st.sets(st.integers(0, n - 1))))
        img_pool = data.draw(st.permutations(range(n)))
        mu = Matching(np.array(dom, dtype=np.int64), np.array(img_pool[: len(dom)], dtype=np.int64))
        ov = overlap(mu, Permutation(list(images)))
        assert 0 <= ov <= len(mu) <= n


class TestMatchingValidation:
    def test_rejects_non_injective(self):
        with pytest.raises(ParameterError):
            Matching.from_pairs([(0, 1), (2, 1)])

    def test_rejects_duplicate_domain(self):
        with pytest.raises(ParameterError):
            Matching.from_pairs([(0, 1), (0, 2)])

    def test_permutation_is_total_matching(self, rng):
        pi = Permutation.random(6, rng)
        assert pi.as_matching().is_total(6)

    def test_rejects_non_bijective_permutation(self):
        with pytest.raises(ParameterError):
            Permutation([0, 0, 1])

    def test_fixed_point_count(self):
        assert Permutation([0, 2, 1, 3]).fixed_point_count() == 2
        assert Permutation.identity(5).fixed_point_fraction() == 1.0


class TestSerialization:
    def test_edgelist_round_trip(self, rng):
        g = sample_er(17, 0.3, rng)
        buf = io.StringIO()
        write_edgelist(g, buf)
        assert read_edgelist(io.StringIO(buf.getvalue())) == g

    def test_edgelist_format(self):
        g = Graph.from_edges(4, [(2, 3), (0, 1), (0, 3)])
        buf = io.StringIO()
        write_edgelist(g, buf)
        assert buf.getvalue() == "4 3\n0 1\n0 3\n2 3\n"

    def test_edgelist_rejects_unordered_pair(self):
        with pytest.raises(SchemaError):
            read_edgelist(io.StringIO("2 1\n1 0\n"))

    def test_matching_json_round_trip(self):
        mu = Matching.from_pairs([(3, 1), (0, 2)])
        payload = matching_to_json(mu)
        assert payload == [[0, 2], [3, 1]]
        assert matching_from_json(payload) == mu

    @given(st.permutations(range(6)))
    @settings(max_examples=30, deadline=None)
    def test_permutation_json_round_trip(self, images):
        pi = Permutation(list(images))
        assert matching_from_json(matching_to_json(pi)) == pi.as_matching()


class TestRngDiscipline:
    def test_same_seed_same_graph(self):
        g1 = sample_er(30, 0.4, make_rng(5))
        g2 = sample_er(30, 0.4, make_rng(5))
        assert g1 == g2

    def test_cer_reproducible(self):
        a = sample_cer(20, 0.5, 0.8, make_rng(9))
        b = sample_cer(20, 0.5, 0.8, make_rng(9))
        assert a.g1 == b.g1 and a.g2 == b.g2 and a.pi_star == b.pi_star
