import math

import numpy as np
import pytest

from thermoplate.mms import (
    CORNER_EXCLUSION_RADIUS,
    ExcludedPointError,
    example1_loads,
    lshape_case,
    smooth_case,
    validate_case,
)


@pytest.fixture(scope="module")
def smooth():
    return smooth_case(-1.0)


@pytest.fixture(scope="module")
def lshape():
    return lshape_case(-1.0)


def test_smooth_residual_oracle(smooth):
    assert validate_case(smooth, rtol=1e-6) < 1e-6
    assert validate_case(smooth_case(1.0), rtol=1e-6) < 1e-6


def test_lshape_residual_oracle(lshape):
    # FD on the r^1.54 singular fields attains ~1e-6; a wrong forcing term
    # would show at order one
    assert validate_case(lshape, rtol=1e-5) < 1e-5
    assert validate_case(lshape_case(1.0), rtol=1e-5) < 1e-5


def test_smooth_initial_and_center_values(smooth):
    x = np.array([0.3, 0.5])
    y = np.array([0.7, 0.5])
    u0 = smooth.u0(x, y)
    assert u0[0] == pytest.approx((0.3 * (0.3 - 1) * 0.7 * (0.7 - 1)) ** 2, rel=1e-14)
    for t in (0.0, 0.4, 1.0):
        val = smooth.u(t, np.array(0.5), np.array(0.5))
        assert val == pytest.approx(math.exp(5 * t) / 256.0, rel=1e-14)


def test_smooth_theta_max_at_center(smooth):
    xs = np.linspace(0, 1, 101)
    X, Y = np.meshgrid(xs, xs)
    th = smooth.theta(0.0, X, Y)
    assert th.max() == pytest.approx(1.0, abs=1e-12)
    idx = np.unravel_index(th.argmax(), th.shape)
    assert (X[idx], Y[idx]) == (0.5, 0.5)


def test_smooth_bilaplacian_center_vs_fd(smooth):
    # closed-form combination entering the transverse forcing
    c = smooth.coeffs

    def bilap(x, y):
        X = (x * (x - 1)) ** 2
        Y = (y * (y - 1)) ** 2
        d2X = 12 * x**2 - 12 * x + 2
        d2Y = 12 * y**2 - 12 * y + 2
        return 24 * Y + 2 * d2X * d2Y + 24 * X

    assert bilap(0.5, 0.5) == pytest.approx(5.0, rel=1e-14)
    h = 1e-2

    def u0(x, y):
        return smooth.u(0.0, np.asarray(x), np.asarray(y))

    def lap(f, x, y):
        return (
            -f(x + 2 * h, y) + 16 * f(x + h, y) - 30 * f(x, y) + 16 * f(x - h, y) - f(x - 2 * h, y)
        ) / (12 * h**2) + (
            -f(x, y + 2 * h) + 16 * f(x, y + h) - 30 * f(x, y) + 16 * f(x, y - h) - f(x, y - 2 * h)
        ) / (12 * h**2)

    fd = lap(lambda x, y: lap(u0, x, y), 0.5, 0.5)
    assert fd == pytest.approx(5.0, rel=1e-5)


def test_smooth_boundary_traces_vanish(smooth):
    rng = np.random.default_rng(8)
    s = rng.uniform(0.0, 1.0, 100)
    sides = [
        (s, np.zeros_like(s), np.array([0.0, -1.0])),
        (s, np.ones_like(s), np.array([0.0, 1.0])),
        (np.zeros_like(s), s, np.array([-1.0, 0.0])),
        (np.ones_like(s), s, np.array([1.0, 0.0])),
    ]
    for t in (0.0, 0.5, 1.0):
        for x, y, n in sides:
            assert np.abs(smooth.u(t, x, y)).max() < 1e-12
            gx, gy = smooth.grad_u(t, x, y)
            assert np.abs(gx * n[0] + gy * n[1]).max() < 1e-12
            assert np.abs(smooth.theta(t, x, y)).max() < 1e-12
            assert np.abs(smooth.p(t, x, y)).max() < 1e-12


def _lshape_boundary_samples(rng, n):
    """Random points on the L-shape boundary with the outward normal."""
    out = []
    while len(out) < n:
        seg = rng.integers(0, 8)
        s = rng.uniform(0.0, 1.0)
        if seg == 0:  # x = 1
            out.append(((1.0, -1.0 + 2.0 * s), (1.0, 0.0), "outer"))
        elif seg == 1:  # y = 1
            out.append(((-1.0 + 2.0 * s, 1.0), (0.0, 1.0), "outer"))
        elif seg == 2:  # x = -1, y in (0, 1)
            out.append(((-1.0, s), (-1.0, 0.0), "outer"))
        elif seg == 3:  # y = -1, x in (0, 1)
            out.append(((s, -1.0), (0.0, -1.0), "outer"))
        elif seg == 4:  # reentrant leg x = 0, y in (-1, 0)
            out.append(((0.0, -max(s, 1e-3)), (-1.0, 0.0), "leg"))
        elif seg == 5:  # reentrant leg y = 0, x in (-1, 0)
            out.append(((-max(s, 1e-3), 0.0), (0.0, -1.0), "leg"))
        elif seg == 6:  # top of left block y = 1
            out.append(((-s, 1.0), (0.0, 1.0), "outer"))
        else:  # right edge of bottom block x = 1
            out.append(((1.0, -s), (1.0, 0.0), "outer"))
    return out


def test_lshape_boundary_traces(lshape):
    rng = np.random.default_rng(21)
    samples = _lshape_boundary_samples(rng, 100)
    for t in (0.25, 1.0):
        for (x, y), n, kind in samples:
            xa, ya = np.array([x]), np.array([y])
            assert abs(float(lshape.u(t, xa, ya)[0])) < 1e-12
            assert abs(float(lshape.theta(t, xa, ya)[0])) < 1e-12
            assert abs(float(lshape.p(t, xa, ya)[0])) < 1e-12
            gx, gy = lshape.grad_u(t, xa, ya)
            dn = abs(float(gx[0] * n[0] + gy[0] * n[1]))
            if kind == "outer":
                assert dn < 1e-12
            else:
                # the 7-digit singular exponent solves the clamped-corner
                # eigenvalue condition only approximately; the residual
                # normal derivative on one leg is at the 1e-6 level
                assert dn < 1e-5


def test_lshape_theta_equals_p(lshape):
    assert lshape.theta is lshape.p
    assert lshape.grad_theta is lshape.grad_p


def test_lshape_exponent_regularity_index():
    # the stated exponent fulfils the clamped-plate corner condition
    # sin^2(ups * w) = ups^2 sin^2(w) at w = 3 pi / 2 to its 7 digits
    ups = 0.5444837
    w = 1.5 * math.pi
    resid = math.sin(ups * w) ** 2 - ups**2 * math.sin(w) ** 2
    assert abs(resid) < 2e-6
    # and neighbouring exponents do worse by orders of magnitude
    for wrong in (0.5, 0.6):
        assert abs(math.sin(wrong * w) ** 2 - wrong**2) > 1e-2


def test_lshape_initial_data_zero(lshape):
    x = np.array([0.5, -0.5, 0.3])
    y = np.array([0.5, 0.25, -0.8])
    assert np.abs(lshape.u0(x, y)).max() == 0.0
    assert np.abs(lshape.ustar0(x, y)).max() == 0.0
    assert np.abs(lshape.theta0(x, y)).max() == 0.0
    assert np.abs(lshape.p0(x, y)).max() == 0.0


def test_lshape_corner_exclusion(lshape):
    with pytest.raises(ExcludedPointError):
        lshape.grad_u(0.5, np.array([1e-9]), np.array([0.0]))
    with pytest.raises(ExcludedPointError):
        lshape.hess_u(0.5, np.array([0.0]), np.array([1e-8]))
    # value callables are defined (by continuity) at the corner
    assert float(lshape.u(0.5, np.array([0.0]), np.array([0.0]))[0]) == 0.0
    assert CORNER_EXCLUSION_RADIUS == 1e-6


def test_example1_loads():
    for kind in ("TED", "TPE"):
        f, phi, g = example1_loads(kind, 0.5)
        x = np.array([0.5, 0.3])
        y = np.array([0.5, 0.9])
        assert float(f(1.0, x, y)[0]) == pytest.approx(1.0, rel=1e-14)
        for t in (0.0, 1.7, 10.0):
            assert np.abs(phi(t, x, y)).max() == 0.0
            assert np.abs(g(t, x, y)).max() == 0.0
    with pytest.raises(ValueError):
        example1_loads("XXX", 0.5)
    with pytest.raises(ValueError):
        example1_loads("TED", 0.0)


def test_invalid_gamma_rejected():
    with pytest.raises(ValueError):
        smooth_case(0.5)
    with pytest.raises(ValueError):
        lshape_case(2.0)
