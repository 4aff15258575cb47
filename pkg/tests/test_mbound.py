import random

import pytest
from mpmath import mp

from primesq.analytic import theorem_floor
from primesq.counting import f_of
from primesq.errors import DomainError
from primesq.mbound import (
    C3_CSV_COLUMNS,
    bound_gap,
    c3_csv,
    c3_table,
    forward_tail_sum,
    m_of,
    m_of_linear,
    s_sum,
    _tail_arrays,
)

# frozen from a 40-digit term-by-term evaluation with a linear-scan search
M_ORACLE = {597: 597, 650: 635, 1000: 911, 2000: 1801}


def quad_floor_sum(lo: int, hi: int) -> int:
    total = 0
    with mp.workprec(160):
        for k in range(lo, hi + 1):
            arg = (((k + 1) ** 2) / mp.log(k + 1) - (k * k) / mp.log(k)) / 2 \
                - mp.log(k) ** 2 / mp.log(mp.log(k))
            total += int(mp.floor(arg))
    return total


def test_s_sum_values():
    assert s_sum(597) == theorem_floor(597)[0] == 64
    assert s_sum(598) == s_sum(597) + theorem_floor(598)[0]
    assert s_sum(600) == 256
    assert s_sum(1000) == quad_floor_sum(597, 1000)


def test_s_sum_matches_fresh_resummation():
    assert s_sum(800) == sum(theorem_floor(k)[0] for k in range(597, 801))


def test_s_sum_domain():
    with pytest.raises(DomainError):
        s_sum(596)


def test_bound_gap_values():
    gap = bound_gap(597)
    assert gap.value == pytest.approx(214.54221406182842, abs=1e-6)
    assert 100 < gap.value < 1000  # order of magnitude 10^2
    with pytest.raises(DomainError):
        bound_gap(596)


def test_bound_gap_positive_and_dominates_f():
    for k in (597, 800, 1200, 5000):
        gap = bound_gap(k)
        assert gap.value > 0
        assert gap.value > f_of(k)  # sandwich audit on samples


def test_m_of_frozen_oracle():
    for n, expected in M_ORACLE.items():
        assert m_of(n) == expected


def test_m_of_within_domain():
    assert m_of(597) == 597
    for n in (650, 1000):
        m = m_of(n)
        assert 597 <= m <= n
    with pytest.raises(DomainError):
        m_of(596)


def test_binary_equals_linear_scan():
    for n in range(597, 900):
        assert m_of(n) == m_of_linear(n), n
    rng = random.Random(17)
    for n in (rng.randrange(900, 2000) for _ in range(25)):
        assert m_of(n) == m_of_linear(n), n


def test_tail_sums_strictly_decreasing():
    for n in (700, 1500):
        tail, _ = _tail_arrays(n)
        for i in range(len(tail) - 1):
            assert tail[i] > tail[i + 1]


def test_forward_backward_summation_agree():
    for m, n in ((597, 800), (1000, 2500), (597, 3000)):
        fwd, ferr = forward_tail_sum(m, n)
        tail, terr = _tail_arrays(n)
        i = m - 597
        assert abs(fwd - tail[i]) <= ferr + terr[i]


def test_c3_table_and_csv():
    recs = c3_table([597, 650])
    assert recs[0].ratio == 1.0
    for rec in recs:
        assert rec.m_value is not None
        assert 0 < rec.ratio <= 1.0
    text = c3_csv(recs)
    lines = text.splitlines()
    assert lines[0] == C3_CSV_COLUMNS
    assert lines[1] == "597,64,597,1.000000"
    with pytest.raises(DomainError):
        c3_table([596])
