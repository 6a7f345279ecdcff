import math

import numpy as np
import pytest

from oracles import closed_form_values
from sheffer_szasz.sheffer import (
    BUILTIN_NAMES,
    FamilyError,
    appell_family,
    builtin_family,
    make_family,
    sheffer_values,
    validate_family,
)


def test_szasz_validates_clean():
    report = validate_family(builtin_family("szasz"))
    assert report.passed and report.warnings == []


def test_h_prime_two_is_rejected():
    fam = make_family([1.0], [0.0, 2.0])
    with pytest.raises(FamilyError, match="H'\\(1\\) = 2"):
        validate_family(fam)


def test_vanishing_a1_is_rejected():
    fam = make_family([1.0, -1.0], [0.0, 1.0])
    with pytest.raises(FamilyError, match="A\\(1\\)"):
        validate_family(fam)


def test_constant_term_in_h_is_rejected():
    with pytest.raises(FamilyError, match="constant term"):
        validate_family(make_family([1.0], [0.5, 1.0]))


def test_example42_warns_about_a0():
    report = validate_family(builtin_family("example42"))
    assert report.passed
    assert any("a_0 = 0" in w for w in report.warnings)


def test_positivity_scan_flags_negative_polynomials():
    # A(t) = 1 - t/2 gives p_1(x) = x - 1/2 < 0 near x = 0
    report = validate_family(make_family([1.0, -0.5], [0.0, 1.0]), scan_grid=[0.0, 0.2, 2.0], scan_order=4)
    assert not report.passed
    assert (0.0, 1, -0.5) in report.negative_at


def test_non_appell_family_with_quadratic_h():
    # H(t) = t/2 + t^2/4: H'(1) = 1, nonnegative coefficients
    fam = make_family([1.0], [0.0, 0.5, 0.25])
    report = validate_family(fam, scan_grid=[0.0, 1.0, 3.0], scan_order=20)
    assert report.passed
    assert fam.H1 == pytest.approx(0.75)
    assert fam.H1pp == pytest.approx(0.5)


def test_values_examples():
    np.testing.assert_allclose(sheffer_values(builtin_family("szasz"), 2.0, 3).values, [1, 2, 2, 4 / 3], rtol=1e-15)
    np.testing.assert_allclose(sheffer_values(builtin_family("example41"), 1.0, 2).values, [1, 2, 2], rtol=1e-15)
    np.testing.assert_allclose(sheffer_values(builtin_family("example42"), 3.0, 2).values, [0, 1, 3], rtol=1e-15)


def test_builtin_coefficients():
    sz = builtin_family("szasz")
    assert sz.A.coeffs[:3].tolist() == [1, 0, 0] and sz.H.coeffs[:3].tolist() == [0, 1, 0]
    e41 = builtin_family("example41")
    np.testing.assert_allclose(e41.A.coeffs[:5], [1 / math.factorial(k) for k in range(5)])
    assert e41.H.coeffs[:3].tolist() == [0, 1, 0]
    e42 = builtin_family("example42")
    assert e42.A.coeffs[:3].tolist() == [0, 1, 0] and e42.H.coeffs[:3].tolist() == [0, 1, 0]
    with pytest.raises(FamilyError):
        builtin_family("laguerre")


def test_cached_constants():
    e41 = builtin_family("example41")
    assert (e41.A1, e41.A1p, e41.A1pp) == pytest.approx((math.e,) * 3, rel=1e-14)
    assert (e41.H1, e41.H1p, e41.H1pp) == (1.0, 1.0, 0.0)
    e42 = builtin_family("example42")
    assert (e42.A1, e42.A1p, e42.A1pp) == (1.0, 1.0, 0.0)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
@pytest.mark.parametrize("x", [0.0, 0.5, 1.0, 2.0, 5.0])
def test_values_match_closed_forms(name, x):
    got = sheffer_values(builtin_family(name), x, 80).values
    want = closed_form_values(name, x, 80)
    nz = want != 0
    np.testing.assert_allclose(got[nz], want[nz], rtol=1e-10)
    assert np.all(got[~nz] == 0)


def test_partial_sums_approach_generating_value():
    p = sheffer_values(builtin_family("szasz"), 1.0, 60).values
    assert abs(p.sum() - math.e) < 1e-12


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_values_at_zero_are_a_coefficients(name):
    fam = builtin_family(name)
    np.testing.assert_array_equal(sheffer_values(fam, 0.0, 20).values, fam.series(20)[0].coeffs)


def test_appell_family_uses_identity_h():
    fam = appell_family([1.0, 0.5, 0.25])
    assert fam.is_appell()
    assert fam.A1 == pytest.approx(1.75)
    # p_1(x) = g_0 x + g_1
    assert sheffer_values(fam, 2.0, 3).values[1] == pytest.approx(2.5)
