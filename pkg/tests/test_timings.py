import math

import pytest

from catlab.analysis import separation_threshold
from catlab.errors import DomainError
from catlab.timings import (
    Scheme,
    comparison_table,
    format_sig,
    prep_time_ref2,
    prep_time_ref14_floor,
    prep_time_ref16,
    prep_time_this_paper,
    round_sig,
)


def test_formulas():
    assert prep_time_this_paper(2.0) == pytest.approx(math.sqrt(2 * math.pi))
    assert prep_time_ref16(0.202, 0.1) == pytest.approx(math.pi * math.exp(0.0204020) / 0.0202, rel=1e-6)
    assert prep_time_ref2(0.202) == pytest.approx(math.pi / 4 * (math.sqrt(math.pi / (2 * 0.202**2)) - 1))
    assert prep_time_ref14_floor(1e7, 1.0) == 1e7


def test_this_scheme_equals_separation_threshold():
    for eta in (0.5, 2.0, 3.0, 7.0):
        assert prep_time_this_paper(eta) == pytest.approx(separation_threshold(eta / 2))


def test_domain_errors():
    with pytest.raises(DomainError):
        prep_time_ref2(2.0)
    with pytest.raises(DomainError):
        prep_time_ref16(0.2, 0.0)
    with pytest.raises(DomainError):
        prep_time_this_paper(-1.0)


def test_formatting():
    assert format_sig(4.0906) == "4.09"
    assert format_sig(158.96) == "159"
    assert format_sig(1e7) == "1.00e7"
    assert format_sig(79.36499) == "79.4"
    assert round_sig(2.0466) == 2.05


def test_table_rows_and_recompute():
    rows = comparison_table()
    assert [r.scheme for r in rows] == [
        Scheme.REF2_SER,
        Scheme.REF16_WER_LDL,
        Scheme.THIS_PAPER,
        Scheme.THIS_PAPER,
        Scheme.REF14_SPONTANEOUS,
    ]
    for r in rows:
        assert r.recompute() == r.value


def test_ref16_doubles_when_omega_halves():
    a = comparison_table(omega=0.1)[1].value
    b = comparison_table(omega=0.2)[1].value
    assert a == pytest.approx(2 * b)
    assert comparison_table(omega=0.2)[1].display == "79.4"
