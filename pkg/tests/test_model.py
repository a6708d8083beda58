import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dyonstring.model import (DomainError, FieldState, Params, residual, residual_by_equation, rhs,
                              rhs_vector)
from oracles import field_equations_rhs

FLAT = FieldState(1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def test_flat_vacuum_is_fixed_point():
    d = rhs(FLAT, Params(lam=0.0, kappa=1.0))
    assert d.as_array().tolist() == [0.0] * 8


def test_lambda_term_alone():
    d = rhs(FLAT, Params(lam=0.5, kappa=1.0))
    assert d.dCp == -0.5
    assert d.dBp == 0.0 and d.dWp == 0.0 and d.dPhip == 0.0


def test_generic_point_against_symbolic_substitution():
    # frozen from oracles.symbolic_second_derivatives (sympy solve of the self-adjoint form)
    s = FieldState(2.0, 1.0, 0.1, 4.0, 1.0, 0.5, -0.2, 0.3, 0.05)
    d = rhs(s, Params(lam=0.01, kappa=1.0))
    assert d.dBp == pytest.approx(-0.10234375, rel=1e-14)
    assert d.dCp == pytest.approx(0.059375, rel=1e-14)
    assert d.dWp == pytest.approx(-0.08125, rel=1e-14)
    assert d.dPhip == pytest.approx(-0.01125, rel=1e-14)


@pytest.mark.slow
def test_symbolic_oracle_reproduces_frozen_values():
    from oracles import symbolic_second_derivatives
    v = dict(r=2, B=1, Bp=0.1, C=4, Cp=1, W=0.5, Wp=-0.2, Phi=0.3, Phip=0.05)
    got = [float(x) for x in symbolic_second_derivatives(v, 0.01, 1)]
    assert got == pytest.approx([-0.10234375, 0.059375, -0.08125, -0.01125], rel=1e-14)


@pytest.mark.parametrize("field", ["r", "B", "C"])
def test_domain_error_at_singular_chart(field):
    kw = dict(r=1.0, B=1.0, Bp=0.0, C=1.0, Cp=0.0, W=0.5, Wp=0.0, Phi=0.1, Phip=0.0)
    kw[field] = 0.0
    with pytest.raises(DomainError):
        rhs(FieldState(**kw), Params())
    kw[field] = 1e-31
    with pytest.raises(DomainError):
        rhs(FieldState(**kw), Params())


def test_params_validation():
    with pytest.raises(ValueError):
        Params(r0=0.0)
    with pytest.raises(ValueError):
        Params(kappa=-1.0)
    with pytest.raises(ValueError):
        Params(g=0.0)


finite = st.floats(-3, 3, allow_nan=False)
positive = st.floats(0.1, 5)


@st.composite
def states(draw):
    return FieldState(draw(positive), draw(positive), draw(finite), draw(positive), draw(finite),
                      draw(finite), draw(finite), draw(finite), draw(finite))


params_st = st.builds(Params, lam=st.floats(-0.5, 0.5), kappa=st.floats(0.1, 3))


@given(states(), params_st)
def test_first_order_consistency(s, p):
    d = rhs(s, p)
    assert (d.dB, d.dC, d.dW, d.dPhi) == (s.Bp, s.Cp, s.Wp, s.Phip)


@given(states(), params_st)
def test_matches_independent_transcription(s, p):
    got = rhs_vector(s.r, s.as_array().tolist(), p)
    ref = field_equations_rhs(s.r, s.as_array().tolist(), p.lam, p.kappa)
    np.testing.assert_allclose(got, ref, rtol=1e-9, atol=1e-9 * max(1.0, np.max(np.abs(ref))))


@given(states(), params_st)
def test_sign_flips(s, p):
    d = rhs(s, p)
    w = rhs(FieldState(s.r, s.B, s.Bp, s.C, s.Cp, -s.W, -s.Wp, s.Phi, s.Phip), p)
    f = rhs(FieldState(s.r, s.B, s.Bp, s.C, s.Cp, s.W, s.Wp, -s.Phi, -s.Phip), p)
    assert w.dWp == -d.dWp and w.dBp == d.dBp and w.dCp == d.dCp and w.dPhip == d.dPhip
    assert f.dPhip == -d.dPhip and f.dBp == d.dBp and f.dCp == d.dCp and f.dWp == d.dWp


@given(states(), params_st, st.floats(0.05, 20), st.floats(0.05, 20))
@settings(max_examples=200)
def test_scale_covariance(s, p, gamma, beta):
    sg = math.sqrt(gamma)
    t = FieldState(s.r, beta * s.B, beta * s.Bp, gamma * s.C, gamma * s.Cp,
                   beta * s.W, beta * s.Wp, sg * s.Phi, sg * s.Phip)
    d, e = rhs(s, p), rhs(t, p)
    scale = max(1.0, *np.abs(d.as_array()))
    for got, want, k in ((e.dCp, d.dCp, gamma), (e.dBp, d.dBp, beta),
                         (e.dPhip, d.dPhip, sg), (e.dWp, d.dWp, beta)):
        assert got == pytest.approx(k * want, rel=1e-9, abs=1e-9 * k * scale)


def test_rhs_is_pure():
    s = FieldState(2.0, 1.0, 0.1, 4.0, 1.0, 0.5, -0.2, 0.3, 0.05)
    p = Params(lam=0.01)
    assert rhs(s, p) == rhs(s, p)


# residual ---------------------------------------------------------------

def _closed_form_window(h, r0=0.01, n=41):
    r = r0 + h * np.arange(n)
    u = 1 + 0.75 * (r - r0)
    return [FieldState(x, 1.0, 0.0, c, cp, 0.0, 0.0, 0.0, 0.0)
            for x, c, cp in zip(r, u ** (4 / 3), np.cbrt(u))]


def test_residual_of_constant_vacuum_is_zero():
    window = [FieldState(1.0 + 0.01 * i, 1, 0, 1, 0, 0, 0, 0, 0) for i in range(5)]
    assert residual(window, Params(lam=0.0)) == 0.0


def test_residual_closed_form_is_second_order():
    p = Params(lam=0.0)
    hs = [0.02, 0.01, 0.005]
    res = [residual_by_equation(_closed_form_window(h), p)[0] for h in hs]
    ks = [e / h ** 2 for e, h in zip(res, hs)]
    # C-equation residual bounded by K h^2 with K measured at the coarsest level
    for e, h in zip(res, hs):
        assert e <= 1.05 * ks[0] * h ** 2
    assert res[0] / res[1] == pytest.approx(4.0, rel=0.05)


def test_residual_detects_corruption():
    p = Params(lam=0.0)
    window = _closed_form_window(0.01)
    clean = residual(window, p)
    bad = list(window)
    s = bad[20]
    bad[20] = FieldState(s.r, s.B, s.Bp, s.C, s.Cp, s.W + 0.1, s.Wp, s.Phi, s.Phip)
    assert residual(bad, p) > 10 * clean


def test_residual_rejects_nonuniform_and_short_windows():
    p = Params()
    w = _closed_form_window(0.01, n=5)
    s = w[2]
    w[2] = FieldState(s.r + 1e-5, *s.as_array())
    with pytest.raises(ValueError, match="uniformly"):
        residual(w, p)
    with pytest.raises(ValueError):
        residual(_closed_form_window(0.01, n=2), p)
