from fractions import Fraction as F

import pytest

from caching_game.core import (
    DigProfile,
    GameConfig,
    HiderMixed,
    HiderPure,
    apply_permutation,
    canonicalize,
    format_hider,
    format_rational,
    make_hider,
    parse_hider,
    parse_rational,
    relabelings,
    validate_hider,
)


def test_parse_format_rational_round_trip():
    for text in ["1/3", "9/20", "2", "0", "11/6"]:
        assert format_rational(parse_rational(text)) == text
    assert parse_rational("4/8") == F(1, 2)
    assert format_rational(F(4, 8)) == "1/2"


def test_parse_rational_rejects_garbage():
    # decimal text is rejected too: values cross boundaries as p/q only
    for bad in ["", "a/b", "1.5", "1/0"]:
        with pytest.raises(ValueError):
            parse_rational(bad)


class TestGameConfig:
    def test_basic_construction(self):
        cfg = GameConfig(n=4, k=2, h=F(11, 5))
        assert (cfg.n, cfg.k, cfg.h) == (4, 2, F(11, 5))

    def test_h_coerced_to_fraction(self):
        assert GameConfig(2, 1, 1).h == F(1)

    @pytest.mark.parametrize("n,k", [(0, 1), (-1, 1), (1, 0), (1, -2)])
    def test_rejects_nonpositive_counts(self, n, k):
        with pytest.raises(ValueError):
            GameConfig(n, k, F(1))

    def test_rejects_negative_budget(self):
        with pytest.raises(ValueError):
            GameConfig(2, 1, F(-1, 2))

    def test_standard_budget_gate(self):
        assert GameConfig(2, 1, F(3, 2)).has_standard_budget()
        assert not GameConfig(2, 1, F(2)).has_standard_budget()
        assert not GameConfig(2, 1, F(1, 2)).has_standard_budget()
        with pytest.raises(ValueError, match="outside"):
            GameConfig(1, 1, F(2)).require_standard_budget()
        # degenerate budgets may still be constructed, for enumeration use
        GameConfig(4, 2, F(0))


class TestHiderPure:
    def test_objects_and_counts(self):
        hp = make_hider((F(1, 3), F(1)), (), (), ())
        assert hp.n == 4
        assert hp.k == 2
        assert hp.objects() == [(0, F(1, 3)), (0, F(1))]
        assert hp.max_depth_sum() == F(1)

    def test_sets_are_sorted_multisets(self):
        hp = make_hider((F(2, 3), F(1, 3)), ())
        assert hp.sets[0] == (F(1, 3), F(2, 3))

    def test_duplicate_depths_allowed(self):
        hp = make_hider((F(1, 4), F(1, 4)), ())
        assert hp.k == 2

    def test_scaled(self):
        hp = make_hider((F(1, 3),), (F(2, 3),))
        assert hp.scaled(3) == ((1,), (2,))
        with pytest.raises(ValueError):
            hp.scaled(2)  # 1/3 is not a multiple of 1/2


def test_validate_hider_reports_violations():
    cfg = GameConfig(2, 2, F(1))
    ok = make_hider((F(1, 2),), (F(1, 2),))
    assert validate_hider(ok, cfg) is None
    wrong_n = make_hider((F(1, 2),), (F(1, 2),), ())
    assert validate_hider(wrong_n, cfg) is not None
    wrong_k = make_hider((F(1, 2),), ())
    assert validate_hider(wrong_k, cfg) is not None
    infeasible = make_hider((F(3, 4),), (F(1, 2),))
    assert "> 1" in validate_hider(infeasible, cfg)


def test_validate_hider_depth_domain():
    cfg = GameConfig(2, 1, F(1))
    assert validate_hider(make_hider((F(3, 2),), ()), cfg) is not None
    zero = make_hider((F(0),), ())
    assert validate_hider(zero, cfg) is not None
    assert validate_hider(zero, cfg, allow_zero_depth=True) is None


def test_infeasible_total_depth_rejected_at_validation_not_construction():
    # constraint is total of per-location maxima, not of all depths
    cfg = GameConfig(2, 2, F(1))
    stacked = make_hider((F(3, 4), F(1)), ())
    assert validate_hider(stacked, cfg) is None


class TestCanonicalization:
    def test_canonical_sorts_locations_empties_last(self):
        hp = make_hider((), (F(1, 2),), (), (F(1, 3), F(1)))
        canon, orbit = canonicalize(hp)
        assert canon.sets[0] != ()
        assert canon.sets[-1] == ()
        assert orbit == len(set(relabelings(hp)))

    def test_relabelings_orbit(self):
        hp = make_hider((F(1, 2),), (F(1, 2),), (), ())
        orbit = relabelings(hp)
        assert len(set(orbit)) == 6
        canon, size = canonicalize(hp)
        assert size == 6
        assert all(canonicalize(o)[0] == canon for o in orbit)

    def test_apply_permutation(self):
        hp = make_hider((F(1, 2),), (F(1, 4),))
        swapped = apply_permutation(hp, (1, 0))
        assert swapped.sets == ((F(1, 4),), (F(1, 2),))


class TestHiderMixed:
    def test_probabilities_validated(self):
        a = make_hider((F(1, 2),), ())
        b = make_hider((), (F(1, 2),))
        HiderMixed(((a, F(1, 2)), (b, F(1, 2))))
        with pytest.raises(ValueError):
            HiderMixed(((a, F(1, 2)), (b, F(1, 3))))
        with pytest.raises(ValueError):
            HiderMixed(((a, F(-1, 2)), (b, F(3, 2))))

    def test_uniform(self):
        mix = HiderMixed.uniform([make_hider((F(1, 2),), ()), make_hider((), (F(1, 2),))])
        assert all(p == F(1, 2) for _, p in mix.entries)

    def test_location_symmetry_detection(self):
        a = make_hider((F(1, 2),), ())
        b = make_hider((), (F(1, 2),))
        assert HiderMixed.uniform([a, b]).is_location_symmetric()
        assert not HiderMixed(((a, F(2, 3)), (b, F(1, 3)))).is_location_symmetric()


class TestDigProfile:
    def test_validation(self):
        DigProfile((F(1, 2), F(0)))
        with pytest.raises(ValueError):
            DigProfile((F(-1, 4),))
        with pytest.raises(ValueError):
            DigProfile((F(5, 4),))

    def test_total_and_indexing(self):
        p = DigProfile((F(1, 2), F(1, 4)))
        assert p.total() == F(3, 4)
        assert len(p) == 2
        assert p[1] == F(1, 4)


def test_format_parse_hider_round_trip():
    examples = [
        make_hider((F(1, 3), F(1)), (), (), ()),
        make_hider((F(1, 2),), (F(1, 2),)),
        make_hider((), (F(7, 30),), (F(1, 60),), ()),
    ]
    for hp in examples:
        assert parse_hider(format_hider(hp)) == hp


def test_format_hider_is_deterministic():
    hp = make_hider((F(1, 3), F(1)), (), (), ())
    assert format_hider(hp) == format_hider(parse_hider(format_hider(hp)))
