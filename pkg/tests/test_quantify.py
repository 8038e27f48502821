import math
import warnings

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from adsharvest.elements import ElementSet
from adsharvest.quantify import (PerturbativityWarning, density_matrix, mutual_information, negativity,
                                 negativity2)
from adsharvest.specfun import DomainError

pos = st.floats(1e-8, 1.0)
phase = st.floats(0.0, 2 * math.pi)


def es(l_aa=0.0, l_bb=0.0, l_ab=0j, m=0j):
    return ElementSet(l_aa=l_aa, l_bb=l_bb, l_ab=l_ab, m=m, m_plus=m, m_minus=0j, c_ab=0j, c_ba=0j)


def test_zero_elements_give_ground_state():
    state = density_matrix(es())
    expected = np.zeros((4, 4))
    expected[0, 0] = 1.0
    assert np.array_equal(state.rho, expected)


def test_negativity_examples():
    assert negativity2(es(0.1, 0.1, m=0.3)) == pytest.approx(0.2)
    assert negativity2(es(0.25, 0.25)) == -0.25
    assert negativity2(es(0.2, 0.1, m=0.2)) == pytest.approx(-0.15 + 0.5 * math.sqrt(0.17), rel=1e-14)
    assert negativity(es(0.2, 0.2, m=0.1)) == 0.0
    assert negativity(es(0.1, 0.1, m=0.3)) == pytest.approx(0.2)


def test_mutual_information_examples():
    assert mutual_information(es(0.3, 0.2, l_ab=0j)) == 0.0
    c = 0.07
    assert mutual_information(es(c, c, l_ab=c * np.exp(0.3j))) == pytest.approx(2 * c * math.log(2), rel=1e-12)
    with pytest.raises(DomainError):
        mutual_information(es(0.1, 0.1, l_ab=0.2))


@given(pos, pos, st.floats(0.0, 1.0), phase, st.floats(0.0, 2.0), phase)
def test_density_matrix_health(l_aa, l_bb, frac, p1, mscale, p2):
    l_ab = frac * math.sqrt(l_aa * l_bb) * np.exp(1j * p1)
    m = mscale * math.sqrt(l_aa * l_bb) * np.exp(1j * p2)
    state = density_matrix(es(l_aa, l_bb, l_ab, m), 0.01, 0.02)
    assert abs(state.trace - 1.0) < 1e-15
    assert np.array_equal(state.rho, state.rho.conj().T)
    assert state.rho[3, 0] == pytest.approx(2e-4 * m)


@given(pos, pos, st.floats(0.0, 1.0), phase)
def test_mutual_information_bounds(l_aa, l_bb, frac, p):
    l_ab = frac * math.sqrt(l_aa * l_bb) * np.exp(1j * p)
    info = mutual_information(es(l_aa, l_bb, l_ab))
    assert info >= -1e-15
    # grows with the correlation strength
    assert mutual_information(es(l_aa, l_bb, 0.5 * l_ab)) <= info + 1e-15


@given(pos, pos, st.floats(0.0, 3.0), phase)
def test_negativity_symmetric_and_monotone(l_aa, l_bb, mscale, p):
    m = mscale * math.sqrt(l_aa * l_bb) * np.exp(1j * p)
    assert negativity2(es(l_aa, l_bb, m=m)) == pytest.approx(negativity2(es(l_bb, l_aa, m=m)), abs=1e-15)
    assert negativity2(es(l_aa, l_bb, m=1.1 * m)) >= negativity2(es(l_aa, l_bb, m=m)) - 1e-15


@given(pos, pos, st.floats(0.0, 3.0), phase)
def test_negativity_matches_partial_transpose(l_aa, l_bb, mscale, p):
    m = mscale * math.sqrt(l_aa * l_bb) * np.exp(1j * p)
    lam = 1e-3
    assume(lam ** 2 * (l_aa + l_bb) < 0.1)
    state = density_matrix(es(l_aa, l_bb, 0j, m), lam, lam).rho
    pt = state.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
    smallest = np.linalg.eigvalsh(pt).min()
    # the |gg>,|ee>-mixing block carries the only eigenvalue that can go negative at this order
    expected = min(0.0, -lam ** 2 * negativity2(es(l_aa, l_bb, m=m)))
    big = max(l_aa, l_bb, abs(m))
    assert smallest == pytest.approx(expected, abs=10 * lam ** 4 * big ** 2 + 1e-18)


def test_perturbativity_warning_and_nan():
    with pytest.warns(PerturbativityWarning):
        density_matrix(es(600.0, 600.0))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        density_matrix(es(1.0, 1.0))
    with pytest.raises(ValueError):
        density_matrix(es(0.1, 0.1, m=complex(math.nan, 0)))
