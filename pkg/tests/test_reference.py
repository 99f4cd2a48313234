"""The closed-form module is the root oracle: everything else is checked
against it, so its own identities are pinned here as exact rational facts."""

from fractions import Fraction
from math import pi, sqrt

import pytest

from nda.reference import (SubshellParams, harmonic_reference,
                           quasiclassical_gap, subshell_kin_nda,
                           subshell_pot_nda, subshell_total)


def test_single_electron_family_identities():
    # kin + pot must reproduce -k Z^2 / (2 n^2) exactly, as Fractions
    for l in range(0, 101):
        p = SubshellParams(k=1, l=l)
        assert subshell_kin_nda(p) + subshell_pot_nda(p) == subshell_total(p)
        assert subshell_total(p) == Fraction(-1, 2 * (l + 1) ** 2)


def test_filled_shell_occupations():
    for l in range(0, 101):
        k_max = 2 * (2 * l + 1)
        p = SubshellParams(k=k_max, l=l)
        assert subshell_total(p) == k_max * subshell_total(SubshellParams(k=1, l=l))
        # the decomposition is per-electron additive
        assert subshell_kin_nda(p) == k_max * subshell_kin_nda(SubshellParams(k=1, l=l))


def test_known_low_l_values():
    assert subshell_kin_nda(SubshellParams(k=1, l=1)) == Fraction(1, 24)
    assert subshell_pot_nda(SubshellParams(k=1, l=1)) == Fraction(-1, 6)
    assert subshell_kin_nda(SubshellParams(k=2, l=1)) == Fraction(1, 12)
    assert subshell_pot_nda(SubshellParams(k=2, l=1)) == Fraction(-1, 3)
    # s states carry no surface term: the radial ground orbital has no node
    assert subshell_kin_nda(SubshellParams(k=1, l=0)) == 0


def test_z_scaling_is_quadratic():
    p1 = SubshellParams(k=1, l=3, Z=Fraction(1))
    p3 = SubshellParams(k=1, l=3, Z=Fraction(3))
    assert subshell_kin_nda(p3) == 9 * subshell_kin_nda(p1)
    assert subshell_pot_nda(p3) == 9 * subshell_pot_nda(p1)


def test_gap_ratios_close_from_below():
    prev_kin, prev_pot = Fraction(-1), Fraction(-1)
    for l in range(1, 101):
        g = quasiclassical_gap(SubshellParams(k=1, l=l))
        assert g["kin_ratio"] == Fraction(l, l + 2)
        assert g["pot_ratio"] == Fraction(l + 1, l + 2)
        # strictly increasing toward 1, never reaching it
        assert prev_kin < g["kin_ratio"] < 1
        assert prev_pot < g["pot_ratio"] < 1
        prev_kin, prev_pot = g["kin_ratio"], g["pot_ratio"]
    at60 = quasiclassical_gap(SubshellParams(k=1, l=60))
    assert 1 - at60["kin_ratio"] < Fraction(5, 100)
    assert 1 - at60["pot_ratio"] < Fraction(5, 100)


def test_gap_independent_of_k_and_z():
    a = quasiclassical_gap(SubshellParams(k=1, l=4))
    b = quasiclassical_gap(SubshellParams(k=9, l=4, Z=Fraction(7)))
    assert a == b


def test_occupation_bounds():
    with pytest.raises(ValueError):
        SubshellParams(k=0, l=1)
    with pytest.raises(ValueError):
        SubshellParams(k=7, l=1)  # p shell holds at most 6
    with pytest.raises(ValueError):
        SubshellParams(k=1, l=-1)
    with pytest.raises(ValueError):
        SubshellParams(k=1, l=1, Z=Fraction(-1))


def test_harmonic_case_a():
    ref = harmonic_reference("a_noninteracting", omega=0.25)
    assert ref["pot_nda"] == 7.0 / 8.0
    assert ref["kin_nda"] == 1.0 / 8.0
    assert ref["total"] == 1.0


def test_harmonic_case_b_closed_form():
    ref = harmonic_reference("b_exact")
    s = sqrt(pi)
    pot = 7.0 / 8.0 + (3.0 / 8.0) * s / (4.0 + 3.0 * s) + (1.0 + 0.5 * s) / (4.0 + 3.0 * s)
    assert ref["pot_nda"] == pot
    assert ref["total"] == 1.25
    assert ref["kin_nda"] == 1.25 - pot
    assert abs(ref["pot_nda"] - 1.148778913173) < 1e-12
    with pytest.raises(ValueError):
        harmonic_reference("b_exact", omega=0.3)


def test_harmonic_case_c_sits_below_the_interacting_level():
    ref = harmonic_reference("c_mixed", omega=0.25, g0=1.0)
    assert ref["pot_nda"] == 7.0 / 8.0 + sqrt(pi * 0.25) / 4.0
    assert ref["kin_nda"] == 1.0 / 8.0
    assert 1.0 < ref["total"] < 1.25
    assert abs(ref["total"] - 1.221556731363) < 1e-12


def test_unknown_case_rejected():
    with pytest.raises(ValueError):
        harmonic_reference("d_other")
