import itertools

import pytest

from holomotion.monodromy import (
    CoveringMotionSpec,
    PointConfig,
    all_subsets_containing_moving,
    build_chirka_counterexample,
    build_trace_counterexample,
    chirka_numbers,
    monodromy_is_trivial,
    restrict_to_subset,
    trace_monodromy_trivial,
    verify_property_A,
)
from holomotion.words import exponent_sums, generator, identity, parse_word, reduce_word


def spec_with_word(n, text):
    config = PointConfig.default(n)
    return CoveringMotionSpec(config, parse_word(text, n + 2))


class TestPointConfig:
    def test_default_layout(self):
        config = PointConfig.default(2)
        assert config.z0 == -1
        assert config.points == (3 + 0j, 4 + 0j)
        assert config.labels() == ("0", "1", "z1", "z2", "inf", "z0")

    def test_generator_assignment(self):
        config = PointConfig.default(2)
        assert [config.generator_label(j) for j in range(4)] == ["0", "1", "z1", "z2"]
        assert config.label_index("z2") == 3
        with pytest.raises(ValueError):
            config.generator_label(4)
        with pytest.raises(ValueError):
            config.label_index("inf")

    def test_rejects_duplicate_points(self):
        with pytest.raises(ValueError):
            PointConfig(n=2, z0=-1, points=(2 + 0j, 2 + 0j))
        with pytest.raises(ValueError):
            PointConfig(n=1, z0=1 + 0j, points=(2 + 0j,))

    def test_word_rank_checked(self):
        with pytest.raises(ValueError, match="rank"):
            CoveringMotionSpec(PointConfig.default(1), identity(2))


class TestMonodromyTriviality:
    def test_identity_word_trivial(self):
        assert monodromy_is_trivial(spec_with_word(0, ""))

    def test_chirka_counterexample_nontrivial(self):
        assert not monodromy_is_trivial(build_chirka_counterexample(0))

    def test_trace_counterexample_nontrivial(self):
        assert not monodromy_is_trivial(build_trace_counterexample(2))


class TestChirkaNumbers:
    def test_counterexample_all_zero(self):
        for n in range(4):
            table = chirka_numbers(build_chirka_counterexample(n))
            assert all(v == 0 for v in table.values())

    def test_single_loop(self):
        table = chirka_numbers(spec_with_word(0, "g0"))
        assert table[frozenset({"z0", "0"})] == 1
        assert table[frozenset({"z0", "1"})] == 0

    def test_fixed_pairs_zero(self):
        table = chirka_numbers(spec_with_word(1, "g0 g2 g2 g1^-1"))
        assert table[frozenset({"0", "1"})] == 0
        assert table[frozenset({"1", "z1"})] == 0
        assert table[frozenset({"z0", "inf"})] == 0

    def test_matches_exponent_sums(self):
        spec = spec_with_word(1, "g0 g2 g2 g1^-1")
        sums = exponent_sums(spec.word)
        table = chirka_numbers(spec)
        for j, label in enumerate(spec.config.finite_fixed_labels()):
            assert table[frozenset({"z0", label})] == sums[j]


class TestRestriction:
    def test_keep_everything_is_identity(self):
        spec = build_trace_counterexample(2)
        res = restrict_to_subset(spec, spec.config.labels())
        assert res.word == reduce_word(spec.word)
        assert not res.dropped_finite and not res.dropped_infinity

    def test_drop_infinity_trivializes_trace_word(self):
        spec = build_trace_counterexample(1)
        kept = [l for l in spec.config.labels() if l != "inf"]
        assert restrict_to_subset(spec, kept).trivial

    def test_drop_finite_point_trivializes_trace_word(self):
        spec = build_trace_counterexample(1)
        kept = [l for l in spec.config.labels() if l != "z1"]
        assert restrict_to_subset(spec, kept).trivial

    def test_requires_moving_point(self):
        spec = build_trace_counterexample(1)
        with pytest.raises(ValueError, match="z0"):
            restrict_to_subset(spec, ["0", "1", "inf"])

    def test_unknown_label(self):
        spec = build_trace_counterexample(1)
        with pytest.raises(ValueError, match="unknown"):
            restrict_to_subset(spec, ["z0", "z9"])

    def test_sphere_relation_used_when_infinity_dropped(self):
        # word g0 g1 with only {z0, 0, 1} kept: the relation g0 g1 = 1 applies
        spec = spec_with_word(0, "g0 g1")
        res = restrict_to_subset(spec, ["z0", "0", "1"])
        assert res.dropped_infinity and res.trivial
        # the same word keeps content when infinity stays
        res2 = restrict_to_subset(spec, ["z0", "0", "1", "inf"])
        assert not res2.trivial

    def test_drop_top_generator_and_infinity_together(self):
        # g0 g1 with z1 (hence g2) and infinity dropped: relation g0 g1 = 1
        spec = spec_with_word(1, "g0 g1")
        res = restrict_to_subset(spec, ["z0", "0", "1"])
        assert res.trivial


class TestTraceMonodromy:
    def test_quadruple_without_moving_point(self):
        spec = build_trace_counterexample(1)
        assert trace_monodromy_trivial(spec, ["0", "1", "inf", "z1"])

    def test_counterexample_standard_quadruple(self):
        spec = build_trace_counterexample(1)
        assert trace_monodromy_trivial(spec, ["z0", "0", "1", "inf"])

    def test_single_loop_quadruple_nontrivial(self):
        spec = spec_with_word(1, "g0")
        assert not trace_monodromy_trivial(spec, ["z0", "0", "1", "inf"])

    def test_all_quadruples_of_counterexample(self):
        for n in (1, 2):
            spec = build_trace_counterexample(n)
            others = [l for l in spec.config.labels() if l != "z0"]
            for combo in itertools.combinations(others, 3):
                assert trace_monodromy_trivial(spec, ("z0", *combo))

    def test_wrong_size(self):
        spec = build_trace_counterexample(1)
        with pytest.raises(ValueError, match="4"):
            trace_monodromy_trivial(spec, ["z0", "0", "1"])

    def test_triviality_propagates_to_quadruples(self):
        # monodromy trivial implies every trace monodromy trivial
        spec = spec_with_word(2, "g0 g1 g1^-1 g0^-1")
        assert monodromy_is_trivial(spec)
        others = [l for l in spec.config.labels() if l != "z0"]
        for combo in itertools.combinations(others, 3):
            assert trace_monodromy_trivial(spec, ("z0", *combo))


class TestBuilders:
    def test_chirka_word_shape(self):
        spec = build_chirka_counterexample(0)
        assert [(l.index, l.sign) for l in spec.word.letters] == [
            (1, 1),
            (0, 1),
            (1, -1),
            (0, -1),
        ]

    def test_trace_builder_delegates_at_zero(self):
        assert build_trace_counterexample(0).word == build_chirka_counterexample(0).word

    def test_property_A_pattern(self):
        for n in (1, 3):
            report = verify_property_A(n)
            assert report.passed
            assert report.full_word_nontrivial
            assert all(report.deletions_trivial)
            assert report.infinity_fill_trivial

    def test_exhaustive_proper_subsets(self):
        for n in (1, 2, 3):
            spec = build_trace_counterexample(n)
            full = frozenset(spec.config.labels())
            for kept in all_subsets_containing_moving(spec.config):
                res = restrict_to_subset(spec, kept)
                if kept == full:
                    assert not res.trivial
                else:
                    assert res.trivial

    def test_negative_n_rejected(self):
        with pytest.raises(ValueError):
            build_chirka_counterexample(-1)
        with pytest.raises(ValueError):
            verify_property_A(0)
