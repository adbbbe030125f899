import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from misinfonet.sharing import (
    ShareRecord,
    build_coshare_graph,
    connectivity_stats,
    filter_domains,
    filter_users,
    ingest,
    jaccard,
    read_share_records,
)


def records_for(pairs):
    return [ShareRecord(user, domain) for user, domain in pairs]


class TestIngest:
    def test_duplicate_share_collapses(self):
        matrix = ingest(records_for([("u", "d.com"), ("u", "d.com")]))
        assert matrix.sharers["d.com"] == {"u"}

    def test_hand_built_3x3(self):
        matrix = ingest(
            records_for(
                [
                    ("u1", "a.com"), ("u1", "b.com"),
                    ("u2", "b.com"), ("u2", "c.com"),
                    ("u3", "a.com"), ("u3", "c.com"),
                ]
            )
        )
        assert matrix.domains == ["a.com", "b.com", "c.com"]
        assert matrix.users == ["u1", "u2", "u3"]
        assert matrix.sharers == {
            "a.com": {"u1", "u3"},
            "b.com": {"u1", "u2"},
            "c.com": {"u2", "u3"},
        }

    def test_malformed_records_skipped_and_counted(self):
        matrix = ingest(
            records_for([("u", "good.com"), ("", "x.com"), ("u", ""), ("u", "???")])
        )
        assert matrix.skipped_records == 3
        assert matrix.domains == ["good.com"]

    def test_permutation_invariant_incidence(self):
        pairs = [(f"u{i % 5}", f"d{i % 7}.com") for i in range(30)]
        shuffled = list(pairs)
        random.Random(0).shuffle(shuffled)
        a = ingest(records_for(pairs))
        b = ingest(records_for(shuffled))
        assert a.sharers == b.sharers

    def test_ndjson_and_csv_loaders(self, tmp_path):
        nd = tmp_path / "records.ndjson"
        nd.write_text('{"user_id": "u1", "domain": "a.com"}\nnot-json\n')
        loaded = ingest(read_share_records(nd))
        assert loaded.sharers == {"a.com": {"u1"}}
        assert loaded.skipped_records == 1
        csv_path = tmp_path / "records.csv"
        csv_path.write_text("user_id,domain\nu1,a.com\nu2,b.com\n")
        loaded = ingest(read_share_records(csv_path))
        assert loaded.sharers == {"a.com": {"u1"}, "b.com": {"u2"}}


class TestFilters:
    def _matrix(self, supports):
        # user ui shares supports[i] distinct domains
        pairs = []
        for i, n in enumerate(supports):
            for j in range(n):
                pairs.append((f"u{i}", f"d{j}.com"))
        return ingest(records_for(pairs))

    def test_user_filter_hand_count(self):
        matrix = filter_users(self._matrix([1, 2, 2, 3, 1]), 2)
        assert matrix.users == ["u1", "u2", "u3"]

    def test_all_single_domain_users_dropped(self):
        matrix = filter_users(self._matrix([1, 1, 1]), 2)
        assert matrix.users == []
        assert all(not users for users in matrix.sharers.values())

    def test_domain_filter_hand_count(self):
        pairs = []
        for d, n in (("a.com", 5), ("b.com", 4), ("c.com", 6)):
            for i in range(n):
                pairs.append((f"u{d}{i}", d))
        matrix = filter_domains(ingest(records_for(pairs)), 5)
        assert matrix.domains == ["a.com", "c.com"]

    def test_zero_sharer_domain_dropped(self):
        matrix = ingest(records_for([("u1", "a.com")]))
        matrix = filter_users(matrix, 2)  # u1 only shared one domain
        matrix = filter_domains(matrix, 1)
        assert matrix.domains == []

    def test_single_pass_postconditions(self):
        # the pipeline applies user-then-domain filtering exactly once; after
        # that pass every kept domain has enough sharers, and every sharer
        # passed the multi-domain floor at the time it was checked
        rng = random.Random(4)
        pairs = [(f"u{rng.randrange(12)}", f"d{rng.randrange(9)}.com") for _ in range(60)]
        user_filtered = filter_users(ingest(records_for(pairs)), 2)
        for user in user_filtered.users:
            assert sum(user in s for s in user_filtered.sharers.values()) >= 2
        final = filter_domains(user_filtered, 5)
        for domain in final.domains:
            assert len(final.sharers[domain]) >= 5
        assert set(final.domains) <= set(user_filtered.domains)


class TestJaccard:
    def test_identical_sets(self):
        assert jaccard({"a", "b"}, {"a", "b"}) == 1.0

    def test_disjoint_sets(self):
        assert jaccard({"a"}, {"b"}) == 0.0

    def test_worked_example(self):
        assert jaccard({"u1", "u2", "u3"}, {"u2", "u3", "u4", "u5"}) == pytest.approx(0.4)

    def test_both_empty(self):
        assert jaccard(set(), set()) == 0.0

    @given(
        st.sets(st.integers(0, 30)).map(lambda s: {str(x) for x in s}),
        st.sets(st.integers(0, 30)).map(lambda s: {str(x) for x in s}),
    )
    def test_symmetric_bounded_and_equality_iff(self, a, b):
        j = jaccard(a, b)
        assert jaccard(b, a) == j
        assert 0.0 <= j <= 1.0
        if a or b:
            assert (j == 1.0) == (a == b)


class TestCoShareGraph:
    def _random_matrix(self, seed, n_domains=20, n_users=40):
        rng = random.Random(seed)
        pairs = []
        for d in range(n_domains):
            for u in rng.sample(range(n_users), rng.randint(0, 12)):
                pairs.append((f"u{u}", f"d{d:02d}.com"))
        return ingest(records_for(pairs))

    def test_matches_brute_force_all_pairs(self):
        for seed in range(10):
            matrix = self._random_matrix(seed)
            graph = build_coshare_graph(matrix, {}, threshold=0.25)
            expected = {}
            names = matrix.domains
            for i in range(len(names)):
                for j in range(i + 1, len(names)):
                    a, b = sorted((names[i], names[j]))
                    score = jaccard(matrix.sharers[a], matrix.sharers[b])
                    if score >= 0.25:
                        expected[(a, b)] = score
            assert graph.edges == expected

    def test_threshold_above_one_gives_empty_edges(self):
        graph = build_coshare_graph(self._random_matrix(1), {}, threshold=1.5)
        assert graph.edges == {}
        assert graph.nodes  # isolated nodes retained

    def test_no_self_edges(self):
        graph = build_coshare_graph(self._random_matrix(2), {}, threshold=0.01)
        assert all(a != b for a, b in graph.edges)

    def test_planted_within_category_exceeds_cross(self):
        # two blocks of domains with block-aligned sharers and light noise
        rng = random.Random(7)
        pairs = []
        labels = {}
        for block, prefix in ((0, "mis"), (1, "inf")):
            for d in range(8):
                domain = f"{prefix}{d}.com"
                labels[domain] = ("misinfo" if block == 0 else "info", "x")
                for u in range(20):
                    if rng.random() < 0.6:
                        pairs.append((f"b{block}u{u}", domain))
        for _ in range(15):  # cross noise
            pairs.append((f"b0u{rng.randrange(20)}", f"inf{rng.randrange(8)}.com"))
        graph = build_coshare_graph(ingest(records_for(pairs)), labels, 0.1)
        stats = connectivity_stats(graph)
        assert stats["misinfo_within"] > stats["misinfo_cross"]
        assert stats["info_within"] > stats["info_cross"]


class TestConnectivityStats:
    def test_single_within_edge(self):
        matrix = ingest(records_for([("u1", "a.com"), ("u1", "b.com")]))
        labels = {"a.com": ("misinfo", ""), "b.com": ("misinfo", "")}
        graph = build_coshare_graph(matrix, labels, 0.5)
        stats = connectivity_stats(graph)
        assert stats == {
            "misinfo_within": 1.0,
            "misinfo_cross": 0.0,
            "info_within": 0.0,
            "info_cross": 0.0,
        }

    def test_empty_graph_all_zero(self):
        graph = build_coshare_graph(ingest([]), {})
        assert connectivity_stats(graph) == {
            "misinfo_within": 0.0, "misinfo_cross": 0.0,
            "info_within": 0.0, "info_cross": 0.0,
        }

    def test_matches_hand_tally(self):
        rng = random.Random(3)
        matrix = TestCoShareGraph()._random_matrix(3)
        labels = {
            d: (rng.choice(["misinfo", "info"]), "") for d in matrix.domains
        }
        graph = build_coshare_graph(matrix, labels, 0.2)
        stats = connectivity_stats(graph)
        for label in ("misinfo", "info"):
            members = [d for d in graph.nodes if graph.nodes[d] == label]
            within = cross = 0
            for (a, b) in graph.edges:
                for end, other in ((a, b), (b, a)):
                    if graph.nodes[end] == label:
                        if graph.nodes[other] == label:
                            within += 1
                        else:
                            cross += 1
            n = len(members) or 1
            assert stats[f"{label}_within"] == pytest.approx(within / n)
            assert stats[f"{label}_cross"] == pytest.approx(cross / n)
