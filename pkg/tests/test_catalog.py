import numpy as np
import pytest

from harmap.catalog import (
    CatalogEntry,
    MapName,
    f_alpha,
    log_shear,
    make_M_alpha_member,
    make_named,
    monomial_dilatation,
    parse_entry,
    shear_horizontal,
    shear_vertical,
)
from harmap.classifiers import coefficient_relation_residual
from harmap.config import MIN_TRUNC_ORDER
from harmap.errors import InvalidParameterError
from harmap.harmonic_map import dilatation, evaluate_f
from harmap.series import combine, generator_closed_form, make_generator

N = 64


def test_f_alpha_coefficients():
    f = f_alpha(1j, N)
    assert f.h[3] == pytest.approx(2.0)
    assert f.g[3] == pytest.approx(1j)
    n = np.arange(N + 1)
    assert np.allclose(f.h.coeffs[1:], (n[1:] + 1) / 2)
    assert np.allclose(f.g.coeffs, 1j * np.maximum(n - 1, 0) / 2)


def test_log_shear_coefficients():
    g = log_shear(N).g
    n = np.arange(1, N + 1)
    assert np.allclose(g.coeffs[1:], 1 - 1 / n, atol=1e-14)


@pytest.mark.parametrize("text, name, alpha", [
    ("F", MapName.F, 1.0),
    ("f_alpha:0,1", MapName.F_ALPHA, 1j),
    ("g_alpha:0.5,-0.25", MapName.G_ALPHA, 0.5 - 0.25j),
    ("example21", MapName.POLYNOMIAL_COLLISION, 1.0),
    ("example22", MapName.LOG_SHEAR, 1.0),
])
def test_parse_entry(text, name, alpha):
    entry = parse_entry(text)
    assert entry.name is name
    assert entry.alpha == alpha


@pytest.mark.parametrize("text", ["koebe", "F:1,0", "f_alpha:1", "f_alpha:2,0"])
def test_parse_entry_rejects(text):
    with pytest.raises(InvalidParameterError):
        parse_entry(text)


def test_m_alpha_parameter():
    assert CatalogEntry(MapName.L).m_alpha_parameter == -1
    assert CatalogEntry(MapName.LOG_SHEAR).m_alpha_parameter == 1
    assert CatalogEntry(MapName.POLYNOMIAL_COLLISION).m_alpha_parameter is None
    assert CatalogEntry(MapName.F_ALPHA, 0.5j).label == "f_alpha:0,0.5"


def test_make_named_needs_order():
    with pytest.raises(InvalidParameterError):
        make_named(CatalogEntry(MapName.F), MIN_TRUNC_ORDER - 1)


def test_shears_reproduce_F_and_L(F, L):
    l = make_generator("half_plane_l", N)
    l_form = generator_closed_form("half_plane_l")
    horizontal = shear_horizontal(l, monomial_dilatation(1.0, 1, N), phi_form=l_form)
    vertical = shear_vertical(l, monomial_dilatation(-1.0, 1, N), phi_form=l_form)
    assert horizontal.h.allclose(F.h) and horizontal.g.allclose(F.g), "F is the horizontal shear of l with w = z"
    assert vertical.h.allclose(L.h) and vertical.g.allclose(L.g), "L is the vertical shear of l with w = -z"
    z = np.array([0.8, -0.9j, 0.6 + 0.6j])
    assert np.allclose(evaluate_f(horizontal, z), evaluate_f(F, z), atol=1e-9)


def test_shear_rejects_large_dilatation():
    l = make_generator("half_plane_l", 16)
    with pytest.raises(InvalidParameterError):
        shear_horizontal(l, monomial_dilatation(1.5, 1, 16))
    with pytest.raises(InvalidParameterError):
        shear_horizontal(l, monomial_dilatation(0.5, 1, 4))


def test_M_alpha_member_relation():
    h = make_generator("half_plane_l", N)
    f = make_M_alpha_member(h, 0.3 - 0.4j, h_form=generator_closed_form("half_plane_l"))
    assert coefficient_relation_residual(f, 0.3 - 0.4j) < 1e-12
    assert f.g[1] == 0
    with pytest.raises(InvalidParameterError):
        make_M_alpha_member(h, 1.5)


def test_every_named_map_builds():
    for name in MapName:
        f = make_named(CatalogEntry(name, 0.5), N)
        assert f.order == N
        assert isinstance(evaluate_f(f, 0.9 * np.exp(0.3j)), complex)


@pytest.mark.parametrize("shear", [shear_horizontal, shear_vertical])
def test_zero_dilatation_shear_is_phi(shear):
    l = make_generator("half_plane_l", N)
    f = shear(l, monomial_dilatation(0.0, 1, N), phi_form=generator_closed_form("half_plane_l"))
    assert f.h.allclose(l)
    assert not np.any(f.g.coeffs)


@pytest.mark.parametrize("shear, sign", [(shear_horizontal, -1.0), (shear_vertical, 1.0)])
def test_shear_dilatation_roundtrip(shear, sign, rng):
    l = make_generator("half_plane_l", N)
    w = monomial_dilatation(0.5j, 2, N)
    f = shear(l, w, phi_form=generator_closed_form("half_plane_l"))
    assert combine(f.h, f.g, "add", scalar=sign).allclose(l), "h - g = phi (horizontal), h + g = phi (vertical)"
    z = 0.9 * np.sqrt(rng.uniform(0, 1, 50)) * np.exp(2j * np.pi * rng.uniform(0, 1, 50))
    assert np.max(np.abs(dilatation(f, z) - w.form.value(z))) < 1e-9
