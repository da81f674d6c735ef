import itertools
import math

import numpy as np
import pytest

from channel_purity import config
from channel_purity.channels import identity_channel, tensor
from channel_purity.channels.werner_holevo import wh_channel
from channel_purity.config import get_optimizer_config
from channel_purity.linalg import eig_hermitian, schatten_norm
from channel_purity.purity import (SchmidtVector, delta, delta_max_entangled,
                                   delta_sweep, find_p0, nu_p_numeric,
                                   nu_p_wh_analytic, schmidt_profile,
                                   schmidt_scan, sign_changes,
                                   ss_output_matrix, ss_output_spectrum)
from channel_purity.utils import (BracketFailure, InvalidDimension,
                                  InvalidExponent, NoConvergence)

EXPONENTS = (1.5, 2, 3, 4, 4.7823, 5, 8, 'inf')


def entangled_norm(p):
    """||S (x) S(|Phi_m><Phi_m|)||_p for d = 3 in closed form."""
    if p == 'inf':
        return 1 / 3
    return (1 + 2 ** (3 - 2 * p)) ** (1 / p) / 3


@pytest.mark.parametrize('d, p, expected', (
    (3, 'inf', 0.5),
    (3, 2, 2 ** -0.5),
    (4, 2, 3 ** -0.5),
    (4, 'inf', 1 / 3),
    (5, 3, 4 ** (-2 / 3)),
))
def test_nu_p_analytic(d, p, expected):
    assert nu_p_wh_analytic(d, p) == pytest.approx(expected, abs=1e-14)


def test_nu_p_analytic_errors():
    with pytest.raises(InvalidDimension):
        nu_p_wh_analytic(2, 2)
    with pytest.raises(InvalidExponent):
        nu_p_wh_analytic(3, 1)


def test_schmidt_vector_canonical_form():
    c = SchmidtVector([0.6, 0, 0.8])
    assert list(c.coeffs) == [0.8, 0.6, 0.0]
    assert c.d == 3
    assert np.allclose(c.reduced(), np.diag([0.64, 0.36, 0]))
    with pytest.raises(ValueError):
        SchmidtVector([1, 1])
    with pytest.raises(ValueError):
        SchmidtVector([-1, 0])


@pytest.mark.parametrize('squares', (
    (0.5, 0.3, 0.2),
    (1, 0, 0),
    (1 / 3, 1 / 3, 1 / 3),
    (0.9, 0.1, 0),
    (0.25, 0.25, 0.25, 0.25),
    (0.4, 0.3, 0.2, 0.1),
))
def test_fast_spectrum_matches_dense(squares):
    c = SchmidtVector.from_squares(squares)
    fast = ss_output_spectrum(c)
    dense = eig_hermitian(ss_output_matrix(c))
    assert np.allclose(fast.values, dense.values, atol=1e-10)
    assert abs(np.sum(fast.values) - 1) < 1e-10


def test_spectrum_maximally_entangled_general_d():
    for d in (3, 4, 5):
        s = ss_output_spectrum(SchmidtVector.maximally_entangled(d))
        scale = (d - 1) ** 2
        assert s.multiplicities() == [
            (round((2 - 2 / d) / scale, 12), 1),
            (round((1 - 2 / d) / scale, 12), d * d - 1)]


@pytest.mark.parametrize('p', (1.5, 2, 3, 5, 8, 'inf'))
def test_entangled_norm_closed_form(p):
    m = ss_output_matrix(SchmidtVector.maximally_entangled(3))
    assert schatten_norm(m, p) == pytest.approx(entangled_norm(p),
                                                abs=1e-10)


@pytest.mark.parametrize('p', EXPONENTS)
def test_delta_closed_form_matches_structured(p):
    c = SchmidtVector.maximally_entangled(3)
    assert abs(delta_max_entangled(p) - delta(p, c)) < 1e-10


@pytest.mark.parametrize('p', EXPONENTS)
def test_delta_structured_matches_dense(p):
    rng = np.random.default_rng(7)
    for _ in range(5):
        c = SchmidtVector.from_squares(rng.dirichlet(np.ones(3)))
        dense = (math.log(schatten_norm(ss_output_matrix(c), p)) -
                 2 * math.log(nu_p_wh_analytic(3, p)))
        assert abs(delta(p, c) - dense) < 1e-10


@pytest.mark.parametrize('p', EXPONENTS)
def test_product_input_has_no_gap(p):
    assert abs(delta(p, SchmidtVector.product(3))) < 1e-10


def test_entangled_output_norm_at_five():
    assert math.exp(delta_max_entangled(5)) * nu_p_wh_analytic(3, 5) ** 2 == \
        pytest.approx((1 + 2 ** -7) ** 0.2 / 3, rel=1e-12)


def test_delta_known_values():
    c = SchmidtVector.maximally_entangled(3)
    assert delta(2, c) == pytest.approx(math.log(math.sqrt(2 / 3)),
                                        abs=1e-10)
    assert delta('inf', c) == pytest.approx(0.2876820724, abs=1e-10)
    assert abs(delta_max_entangled('inf') - math.log(4 / 3)) < 1e-12
    assert abs(delta_max_entangled(4.7823)) < 2e-5
    assert delta_max_entangled(2) == pytest.approx(
        math.log(4 / 3) + 0.5 * math.log(3 / 8), abs=1e-12)


def test_delta_strictly_increasing():
    values = [delta_max_entangled(p) for p in np.linspace(2, 10, 100)]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert delta_max_entangled(4) < 0 < delta_max_entangled(5)


@pytest.mark.parametrize('d', (4, 5))
def test_delta_max_entangled_general_d(d):
    c = SchmidtVector.maximally_entangled(d)
    for p in (2, 5, 'inf'):
        assert abs(delta_max_entangled(p, d) - delta(p, c)) < 1e-10


def test_find_p0():
    p0 = find_p0(1e-6)
    assert 4.7822 <= p0 <= 4.7824
    assert abs(find_p0(1e-6) - 4.7823) < 1e-3
    assert abs(delta_max_entangled(find_p0(1e-10))) <= 1e-10


def test_find_p0_other_dimension():
    p0 = find_p0(1e-8, d=4)
    assert abs(delta_max_entangled(p0, 4)) <= 1e-8


def test_find_p0_errors():
    with pytest.raises(BracketFailure):
        find_p0(1e-6, bracket=(5, 10))
    with pytest.raises(ValueError):
        find_p0(0)


def test_find_p0_stall():
    with pytest.raises(NoConvergence):
        find_p0(1e-300)
    p0 = find_p0(1e-300, strict=False)
    assert abs(p0 - 4.7823) < 1e-3
    assert abs(delta_max_entangled(p0)) < 1e-12


def test_delta_sweep_one_crossing():
    rows = delta_sweep(2, 10, 81)
    assert len(rows) == 81
    (lo, hi), = sign_changes(rows)
    assert 4.7 - 1e-9 <= lo < hi <= 4.8 + 1e-9


def test_delta_sweep_small_p_negative():
    rows = delta_sweep(1.1, 2, 50)
    assert all(value < 0 for _, value in rows)
    assert sign_changes(rows) == []


def test_delta_sweep_bad_range():
    with pytest.raises(InvalidExponent):
        delta_sweep(0.5, 2, 10)
    with pytest.raises(ValueError):
        delta_sweep(3, 2, 10)


def test_schmidt_scan_below_p0_picks_corner():
    scan = schmidt_scan(4, 60)
    assert len(scan.rows) == 61 * 62 // 2
    assert scan.kind() == 'corner'
    assert abs(scan.best[2]) < 1e-10


def test_schmidt_scan_above_p0_picks_center():
    scan = schmidt_scan(5, 60)
    assert scan.kind() == 'center'
    assert scan.best[:2] == (20 / 60, 20 / 60)
    assert abs(scan.best[2] - delta_max_entangled(5)) < 1e-10
    assert scan.best[2] > 0


def test_corner_and_center_nearly_tie_at_p0():
    corner = delta(4.7823, SchmidtVector.product(3))
    center = delta(4.7823, SchmidtVector.maximally_entangled(3))
    assert abs(corner - center) < 2e-4


@pytest.mark.parametrize('p', (2, 4, 5, 'inf'))
def test_delta_symmetric_in_schmidt_squares(p):
    n = 12
    for i in range(n + 1):
        for j in range(n + 1 - i):
            squares = (i / n, j / n, (n - i - j) / n)
            values = [delta(p, SchmidtVector.from_squares(s))
                      for s in itertools.permutations(squares)]
            assert max(values) - min(values) < 1e-10


def test_schmidt_profile():
    c = SchmidtVector.from_squares([0.5, 0.3, 0.2])
    assert np.allclose(schmidt_profile(c.state(), (3, 3)), c.coeffs)
    product = np.kron([1, 0], [0, 1, 0])
    assert np.allclose(schmidt_profile(product, (2, 3)), [1, 0])


@pytest.mark.parametrize('d', (3, 4))
@pytest.mark.parametrize('p', (2, 3, 'inf'))
def test_nu_p_numeric_matches_analytic(d, p):
    report = nu_p_numeric(wh_channel(d), p, seed=1)
    analytic = nu_p_wh_analytic(d, p)
    assert -1e-6 <= report.value - analytic <= 1e-12
    assert report.fraction_within(analytic, 1e-6) >= 0.95
    assert report.converged
    assert len(report.values) == report.restarts_used == config.RESTARTS


@pytest.mark.parametrize('p', (2, 3, 'inf'))
def test_identity_channel_is_pure(p):
    report = nu_p_numeric(identity_channel(3), p,
                          get_optimizer_config(restarts=3))
    assert report.value == pytest.approx(1.0, abs=1e-12)


def test_nu_p_numeric_deterministic():
    ch = tensor(wh_channel(3), wh_channel(3))
    cfg = get_optimizer_config(restarts=3, max_iter=20)
    a = nu_p_numeric(ch, 3, cfg, seed=5)
    b = nu_p_numeric(ch, 3, cfg, seed=5)
    assert a.values == b.values
    assert np.array_equal(a.maximizer, b.maximizer)


def test_tensor_square_at_least_product():
    s = wh_channel(3)
    report = nu_p_numeric(tensor(s, s), 2,
                          get_optimizer_config(restarts=5, max_iter=2000,
                                               tol=1e-13))
    assert report.value >= nu_p_wh_analytic(3, 2) ** 2 - 1e-8


@pytest.mark.parametrize('p', (5, 'inf'))
def test_tensor_square_finds_entangled_maximizer(p):
    s = wh_channel(3)
    report = nu_p_numeric(tensor(s, s), p)
    product = nu_p_wh_analytic(3, p) ** 2
    entangled = product * math.exp(delta_max_entangled(p))
    assert abs(report.value - entangled) < 1e-6
    assert report.value > product
    gap = math.log(report.value) - math.log(product)
    assert abs(gap - delta_max_entangled(p)) < 1e-5
    assert np.allclose(schmidt_profile(report.maximizer, (3, 3)),
                       [3 ** -0.5] * 3, atol=1e-2)
