"""Semilinear sets: membership, positivity, and the text format."""

import itertools

import pytest

from conftest import fixture_path
from ncmkit.semilinear import (
    LinearSet,
    SemilinearFormatError,
    SemilinearSet,
    dump_semilinear,
    is_m_positive,
    linear_member,
    load_semilinear,
    parse_semilinear,
    semilinear_member,
)

EX3_SET = SemilinearSet(2, (LinearSet(2, (2, 3), ((1, 2), (2, 5))),))


def brute_members(sls: SemilinearSet, bound: int) -> set:
    """All vectors with coordinates <= bound, by coefficient search."""
    out = set()
    for comp in sls.components:
        cap = bound + 1
        for coeffs in itertools.product(range(cap), repeat=len(comp.periods)):
            vec = list(comp.constant)
            for c, period in zip(coeffs, comp.periods):
                for i, x in enumerate(period):
                    vec[i] += c * x
            if all(x <= bound for x in vec):
                out.add(tuple(vec))
    return out


class TestMembership:
    def test_against_coefficient_enumeration(self):
        expected = brute_members(EX3_SET, 30)
        for vec in itertools.product(range(31), repeat=2):
            assert semilinear_member(EX3_SET, vec) == (vec in expected), vec

    def test_zero_period_components(self):
        comp = LinearSet(2, (1, 1), ((0, 0),))
        assert linear_member(comp, (1, 1))
        assert not linear_member(comp, (2, 1))

    def test_multiple_components(self):
        sls = SemilinearSet(1, (
            LinearSet(1, (0,), ((2,),)),
            LinearSet(1, (3,), ()),
        ))
        members = {n for n in range(10) if semilinear_member(sls, (n,))}
        assert members == {0, 2, 3, 4, 6, 8}

    def test_empty_set_has_no_members(self):
        sls = SemilinearSet.empty(2)
        assert not semilinear_member(sls, (0, 0))

    def test_arity_checked(self):
        with pytest.raises(ValueError):
            semilinear_member(EX3_SET, (1, 2, 3))


class TestPositivity:
    def test_counts_nonzero_coordinates_per_period(self):
        assert is_m_positive(EX3_SET, 2)
        assert not is_m_positive(
            SemilinearSet(3, (LinearSet(3, (0, 0, 0), ((1, 1, 1),)),)), 2)
        assert is_m_positive(
            SemilinearSet(3, (LinearSet(3, (5, 5, 5), ((1, 0, 0),)),)), 1)

    def test_no_periods_is_vacuously_positive(self):
        assert is_m_positive(SemilinearSet(1, (LinearSet(1, (4,), ()),)), 1)

    def test_m_must_be_positive(self):
        with pytest.raises(ValueError):
            is_m_positive(EX3_SET, 0)


class TestFormat:
    def test_fixture_loads(self):
        sls = load_semilinear(fixture_path("example3.sls"))
        assert sls == EX3_SET

    def test_round_trip(self):
        sls = SemilinearSet(3, (
            LinearSet(3, (0, 1, 2), ((1, 0, 0), (0, 2, 2))),
            LinearSet(3, (7, 0, 0), ()),
        ))
        assert parse_semilinear(dump_semilinear(sls)) == sls

    @pytest.mark.parametrize("bad", [
        "",
        "linear 1 2",
        "semilinear dim=2\nperiod 1 2",
        "semilinear dim=2\nlinear 1\n",
        "semilinear dim=2\nlinear 1 2\nperiod 1 2 3",
        "semilinear dim=x\nlinear 1 2",
        "semilinear dim=2\nlinear 1 -2",
    ])
    def test_format_errors(self, bad):
        with pytest.raises(SemilinearFormatError):
            parse_semilinear(bad)

    def test_validation(self):
        with pytest.raises(ValueError):
            LinearSet(2, (1,), ())
        with pytest.raises(ValueError):
            LinearSet(2, (1, 1), ((-1, 0),))
        with pytest.raises(ValueError):
            SemilinearSet(2, (LinearSet(1, (1,), ()),))
