import pytest
from hypothesis import given, strategies as st

from hingedmems.model import DimensionalInputs, Params, nondimensionalize, validate

pos = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)


def test_default_params_valid():
    assert validate(Params(beta=1, tau=0, sigma=0, eps=0.1, lam=0.5, kappa=1)) == []


@pytest.mark.parametrize("change, message", [
    ({"sigma": 1.5}, "sigma not in (-1,1)"),
    ({"beta": 0.0}, "beta <= 0"),
    ({"tau": -1.0}, "tau < 0"),
    ({"eps": -0.1}, "eps < 0"),
    ({"lam": -1.0}, "lambda < 0"),
    ({"kappa": -1.0}, "kappa < 0"),
])
def test_validate_reports_violation(change, message):
    assert validate(Params().with_(**change)) == [message]


def test_params_are_immutable():
    p = Params()
    with pytest.raises(Exception):
        p.beta = 2.0
    assert p.with_(lam=0.3).lam == 0.3 and p.lam == 0.0


def test_unit_ratio_gives_unit_eps():
    p = nondimensionalize(DimensionalInputs(B=1, T=0, V=1, H=1, L=1), sigma=0.0)
    assert p.eps == 1.0


def test_unit_inputs_lambda():
    p = nondimensionalize(DimensionalInputs(B=1, T=0, V=1, H=1, L=1, eps0=2.0), sigma=0.0)
    assert p.lam == pytest.approx(1.0, rel=1e-15)


def test_hand_calculated_device():
    p = nondimensionalize(DimensionalInputs(B=1, T=0, V=100, H=0.1, L=1, eps0=8.854e-12), sigma=0.0)
    assert p.eps == pytest.approx(0.1, rel=1e-15)
    assert p.lam == pytest.approx(4.427e-5, rel=1e-12)
    assert p.beta == 1.0 and p.tau == 0.0 and p.kappa == 1.0


def test_tension_scaling():
    p = nondimensionalize(DimensionalInputs(B=1, T=3.0, V=1, H=0.1, L=2.0), sigma=0.2)
    assert p.tau == pytest.approx(12.0)


@pytest.mark.parametrize("field", ["B", "V", "H", "L", "eps0"])
def test_nonpositive_inputs_rejected(field):
    kw = dict(B=1.0, T=0.0, V=1.0, H=1.0, L=1.0)
    kw[field] = 0.0
    with pytest.raises(ValueError):
        nondimensionalize(DimensionalInputs(**kw), sigma=0.0)


@pytest.mark.parametrize("sigma", [-1.0, 1.0, 2.0])
def test_sigma_out_of_range_rejected(sigma):
    with pytest.raises(ValueError):
        nondimensionalize(DimensionalInputs(B=1, T=0, V=1, H=1, L=1), sigma=sigma)


@given(B=pos, T=st.floats(0, 1e3), V=pos, H=pos, L=pos,
       sigma=st.floats(-0.99, 0.99))
def test_scaling_laws_and_validity(B, T, V, H, L, sigma):
    d = DimensionalInputs(B, T, V, H, L)
    p = nondimensionalize(d, sigma)
    assert validate(p) == []
    p2 = nondimensionalize(DimensionalInputs(B, T, 2 * V, H, L), sigma)
    assert p2.lam == pytest.approx(4 * p.lam, rel=1e-12)
    p3 = nondimensionalize(DimensionalInputs(B, T, V, 2 * H, L), sigma)
    assert p3.eps == pytest.approx(2 * p.eps, rel=1e-12)
    assert p3.lam == pytest.approx(p.lam / 8, rel=1e-12)
