import functools
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deckforge.docmodel import parse_document
from deckforge.rougeval import (
    RougeReport,
    RougeScore,
    comparison_csv,
    compare_strategies,
    lcs_length,
    mean_report,
    random_selection,
    render_rouge_table,
    rouge_l,
    rouge_n,
    score_summary,
)
from deckforge.summarize import SummaryConfig

GOLDEN = Path(__file__).parent / "golden"

tokens = functools.partial(str.split)


class TestRougeN:
    def test_identical_texts(self):
        t = tokens("a b c d")
        score = rouge_n(t, t, 1)
        assert (score.f, score.p, score.r) == (1.0, 1.0, 1.0)

    def test_disjoint_bigrams(self):
        score = rouge_n(tokens("a b c"), tokens("x y z"), 2)
        assert (score.f, score.p, score.r) == (0.0, 0.0, 0.0)

    def test_hand_counted_unigram_case(self):
        cand = tokens("the cat sat on the mat")
        ref = tokens("the cat lay on the mat")
        score = rouge_n(cand, ref, 1)
        assert score.p == pytest.approx(5 / 6, abs=1e-9)
        assert score.r == pytest.approx(5 / 6, abs=1e-9)
        assert score.f == pytest.approx(5 / 6, abs=1e-9)

    def test_clipped_counts(self):
        # candidate repeats "a" three times; reference has it once
        score = rouge_n(tokens("a a a"), tokens("a b c"), 1)
        assert score.p == pytest.approx(1 / 3)
        assert score.r == pytest.approx(1 / 3)

    def test_empty_sides(self):
        assert rouge_n([], tokens("a"), 1) == RougeScore(0.0, 0.0, 0.0)
        assert rouge_n(tokens("a"), [], 1) == RougeScore(0.0, 0.0, 0.0)
        # n longer than both sequences: no n-grams at all
        assert rouge_n(tokens("a"), tokens("a"), 2) == RougeScore(0.0, 0.0, 0.0)

    def test_n_below_one_rejected(self):
        with pytest.raises(ValueError):
            rouge_n(tokens("a"), tokens("a"), 0)

    @given(st.lists(st.sampled_from("abc"), min_size=1, max_size=12))
    @settings(max_examples=100)
    def test_self_similarity_is_one(self, toks):
        for n in range(1, len(toks) + 1):
            assert rouge_n(toks, toks, n).f == pytest.approx(1.0)

    @given(
        st.lists(st.sampled_from("abcd"), min_size=1, max_size=10),
        st.lists(st.sampled_from("abcd"), min_size=1, max_size=10),
    )
    @settings(max_examples=150)
    def test_truncation_never_increases_recall(self, cand, ref):
        full = rouge_n(cand, ref, 1).r
        truncated = rouge_n(cand[:-1], ref, 1).r
        assert truncated <= full + 1e-12

    @given(
        st.lists(st.sampled_from("abcd"), min_size=0, max_size=10),
        st.lists(st.sampled_from("abcd"), min_size=0, max_size=10),
    )
    @settings(max_examples=150)
    def test_bounds_and_f_between_p_and_r(self, cand, ref):
        score = rouge_n(cand, ref, 1)
        assert 0.0 <= score.p <= 1.0
        assert 0.0 <= score.r <= 1.0
        assert min(score.p, score.r) - 1e-12 <= score.f <= max(score.p, score.r) + 1e-12


def recursive_lcs(a, b):
    """Exhaustive recursive definition, memoized per (i, j) pair."""

    @functools.lru_cache(maxsize=None)
    def go(i, j):
        if i == 0 or j == 0:
            return 0
        if a[i - 1] == b[j - 1]:
            return go(i - 1, j - 1) + 1
        return max(go(i - 1, j), go(i, j - 1))

    return go(len(a), len(b))


class TestRougeL:
    def test_classic_dp_example(self):
        cand = list("ABCBDAB")
        ref = list("BDCABA")
        assert lcs_length(cand, ref) == 4
        score = rouge_l(cand, ref)
        assert score.p == pytest.approx(4 / 7)
        assert score.r == pytest.approx(4 / 6)
        expected_f = 2 * (4 / 7) * (4 / 6) / ((4 / 7) + (4 / 6))
        assert score.f == pytest.approx(expected_f)

    def test_empty_candidate(self):
        assert rouge_l([], tokens("a b")) == RougeScore(0.0, 0.0, 0.0)

    def test_identity(self):
        t = tokens("one two three")
        assert rouge_l(t, t) == RougeScore(1.0, 1.0, 1.0)

    @given(
        st.lists(st.sampled_from("abc"), max_size=7),
        st.lists(st.sampled_from("abc"), max_size=7),
    )
    @settings(max_examples=300)
    def test_matches_recursive_oracle(self, a, b):
        assert lcs_length(a, b) == recursive_lcs(tuple(a), tuple(b))


class TestPublishedTableFixture:
    """Candidate/reference pair engineered to reproduce the stored rouge-1
    and rouge-2 reference rows exactly (matches 23/51/53 and 8/50/52)."""

    @staticmethod
    def fixture_pair():
        shared_run = [f"s{i}" for i in range(9)]
        shared_words = [f"u{i}" for i in range(14)]
        ref_only = [f"x{i}" for i in range(30)]
        cand_fill = [f"f{i}" for i in range(14)]
        cand_pad = [f"g{i}" for i in range(14)]
        reference = shared_run + shared_words + ref_only  # 53 tokens
        candidate = list(shared_run)  # bigram-matching block
        for filler, shared in zip(cand_fill, shared_words):
            candidate += [filler, shared]  # unigram matches, no new bigrams
        candidate += cand_pad  # 51 tokens total
        return candidate, reference

    def test_row_values(self):
        candidate, reference = self.fixture_pair()
        assert len(candidate) == 51 and len(reference) == 53
        r1 = rouge_n(candidate, reference, 1)
        assert r1.f == pytest.approx(0.442307, abs=1e-5)
        assert r1.p == pytest.approx(0.45098, abs=1e-5)
        assert r1.r == pytest.approx(0.43396, abs=1e-5)
        r2 = rouge_n(candidate, reference, 2)
        assert r2.f == pytest.approx(0.15686, abs=1e-5)
        assert r2.p == pytest.approx(0.16, abs=1e-9)
        assert r2.r == pytest.approx(0.15384, abs=1e-5)
        # rouge-l on this pair follows the LCS (23 shared tokens in order)
        rl = rouge_l(candidate, reference)
        assert rl.p == pytest.approx(23 / 51)
        assert rl.r == pytest.approx(23 / 53)


class TestRendering:
    def reference_report(self) -> RougeReport:
        return RougeReport(
            rouge1=RougeScore(f=0.442307, p=0.45098, r=0.43396),
            rouge2=RougeScore(f=0.15686, p=0.16, r=0.15384),
            rougeL=RougeScore(f=0.45714, p=0.45714, r=0.45714),
        )

    def test_table_matches_golden_bytes(self):
        rendered = render_rouge_table(self.reference_report())
        golden = (GOLDEN / "table_reference.txt").read_bytes()
        assert rendered.encode("utf-8") == golden

    def test_table_structure(self):
        lines = render_rouge_table(self.reference_report()).splitlines()
        assert lines[0].split() == ["f", "p", "r"]
        assert [line.split()[0] for line in lines[1:]] == [
            "rouge-1",
            "rouge-2",
            "rouge-l",
        ]

    def test_csv_lines(self):
        csv = comparison_csv({"centroid": self.reference_report()})
        lines = csv.splitlines()
        assert lines[0] == "metric,strategy,f,p,r"
        assert lines[1] == "rouge-1,centroid,0.442307,0.450980,0.433960"
        assert len(lines) == 4
        assert csv.endswith("\n") and "\r" not in csv


class TestCompareStrategies:
    def test_verbatim_reference_scores_one(self):
        doc = parse_document("# T\nOnly sentence here.", "markdown")
        reports = compare_strategies(
            doc, "Only sentence here.", ["centroid", "textrank"], SummaryConfig()
        )
        for report in reports.values():
            assert report.rouge1.f == pytest.approx(1.0)
            assert report.rougeL.f == pytest.approx(1.0)

    def test_empty_candidate_scores_zero(self):
        assert score_summary([], tokens("a b")) == RougeReport(
            RougeScore(0, 0, 0), RougeScore(0, 0, 0), RougeScore(0, 0, 0)
        )

    def test_empty_reference_rejected(self):
        doc = parse_document("# T\nOnly sentence here.", "markdown")
        with pytest.raises(ValueError):
            compare_strategies(doc, "  ", ["centroid"], SummaryConfig())

    def test_unknown_strategy(self):
        doc = parse_document("# T\nOnly sentence here.", "markdown")
        with pytest.raises(ValueError):
            compare_strategies(doc, "ref", ["bogus"], SummaryConfig())

    def test_random_selection_deterministic(self):
        cfg = SummaryConfig(seed=42)
        a = random_selection(15, cfg)
        b = random_selection(15, cfg)
        assert a == b
        assert len({i for i, _ in a.selected}) == a.k

    def test_mean_report(self):
        one = RougeReport(
            RougeScore(1.0, 1.0, 1.0), RougeScore(0.0, 0.0, 0.0), RougeScore(0.5, 0.5, 0.5)
        )
        zero = RougeReport(
            RougeScore(0.0, 0.0, 0.0), RougeScore(0.0, 0.0, 0.0), RougeScore(0.5, 0.5, 0.5)
        )
        mean = mean_report([one, zero])
        assert mean.rouge1.f == pytest.approx(0.5)
        assert mean.rougeL.f == pytest.approx(0.5)
