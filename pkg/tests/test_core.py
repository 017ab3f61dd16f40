"""Tests for function representations, norms, Fourier analysis, bracket."""

import math

import numpy as np
import pytest

from neklab import DomainSpec, GridFunction, TrigPoly, action_axis, angle_axis, poisson_bracket
from neklab.errors import DomainError, ResolutionError
from neklab.fourier import fourier_coefficients, fourier_decay_check
from neklab.norms import holder_norm_estimate, strip_sup_norm, weighted_fourier_norm
from neklab.trigpoly import ActionPoly, random_real_trigpoly


# ---------------------------------------------------------------------------
# fourier_coefficients
# ---------------------------------------------------------------------------

def test_fourier_single_harmonic():
    f = GridFunction.sample(lambda p: np.cos(p[:, 0]), [angle_axis(64)])
    tab = fourier_coefficients(f, 4)
    assert tab.coeffs[(1,)] == pytest.approx(0.5, abs=1e-12)
    assert tab.coeffs[(-1,)] == pytest.approx(0.5, abs=1e-12)
    others = [k for k in tab.harmonics() if k not in ((1,), (-1,))]
    assert max(tab.sup_abs(k) for k in others) < 1e-12


def test_fourier_constant():
    f = GridFunction.sample(lambda p: 3.0 * np.ones(p.shape[0]), [angle_axis(16)])
    tab = fourier_coefficients(f, 3)
    assert tab.coeffs[(0,)] == pytest.approx(3.0, abs=1e-13)
    assert all(tab.sup_abs(k) < 1e-13 for k in tab.harmonics() if k != (0,))


def _quadrature_coefficient(fn, k, nodes=4096):
    """Independent trapezoid quadrature of (2pi)^-2 int f e^{-ik.theta}."""
    t = np.linspace(0, 2 * np.pi, nodes, endpoint=False)
    t1, t2 = np.meshgrid(t, t, indexing="ij")
    vals = fn(t1, t2) * np.exp(-1j * (k[0] * t1 + k[1] * t2))
    return vals.mean()


def test_fourier_product_harmonics_against_quadrature():
    fn = lambda a, b: np.sin(a) * np.cos(b)
    f = GridFunction.sample(lambda p: fn(p[:, 0], p[:, 1]), [angle_axis(32), angle_axis(32)])
    tab = fourier_coefficients(f, 2)
    for k, want in [((1, 1), -0.25j), ((1, -1), -0.25j), ((-1, 1), 0.25j), ((-1, -1), 0.25j)]:
        assert tab.coeffs[k] == pytest.approx(want, abs=1e-12)
        oracle = _quadrature_coefficient(fn, k)
        assert tab.coeffs[k] == pytest.approx(oracle, abs=1e-8)
    assert tab.is_real()


def test_fourier_underresolved_grid_rejected():
    f = GridFunction.sample(lambda p: np.cos(p[:, 0]), [angle_axis(8)])
    with pytest.raises(ResolutionError):
        fourier_coefficients(f, 4)


def test_fourier_requires_periodic_angles():
    f = GridFunction.sample(lambda p: np.cos(p[:, 0]), [action_axis(0, 2 * np.pi, 33)])
    with pytest.raises(DomainError):
        fourier_coefficients(f, 2)


def test_fourier_roundtrip_bandlimited():
    rng = np.random.default_rng(7)
    g = random_real_trigpoly(rng, 2, max_k=3, harmonics=6)
    axes = [angle_axis(16), angle_axis(16)]
    f = GridFunction.sample(lambda p: g(np.zeros((p.shape[0], 2)), p), axes)
    tab = fourier_coefficients(f, 3)
    recon = np.real(tab.synthesize(axes))
    assert np.max(np.abs(recon - f.values)) < 1e-10


# ---------------------------------------------------------------------------
# weighted Fourier norm
# ---------------------------------------------------------------------------

def test_weighted_norm_zero_width():
    g = TrigPoly.cosine(1, (1,))
    assert weighted_fourier_norm(g, DomainSpec(radius=1.0), 0.0) == pytest.approx(1.0)


def test_weighted_norm_exponential_weights():
    g = TrigPoly.cosine(1, (1,))
    val = weighted_fourier_norm(g, DomainSpec(radius=1.0), math.log(2.0))
    assert val == pytest.approx(2.0, rel=1e-12)


def test_weighted_norm_empty_sample_rejected():
    g = TrigPoly.cosine(1, (1,))
    with pytest.raises(DomainError):
        weighted_fourier_norm(g, DomainSpec(radius=1.0), 0.0, points_per_axis=0)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_norm_chain_inequality(seed):
    # |g|_{r,s} <= ||g||_{r,s} <= coth^n(sigma) |g|_{r,s+sigma}, sigma = 1/2
    rng = np.random.default_rng(seed)
    n = 2
    g = random_real_trigpoly(rng, n, max_k=2, degree=1, harmonics=5)
    g = g.filter(lambda k: sum(abs(v) for v in k) <= 4)
    dom = DomainSpec(radius=0.8, r=0.0, s=0.25)
    sigma = 0.5
    sup_s = strip_sup_norm(g, dom, 0.25, points_per_axis=64)
    wfn = weighted_fourier_norm(g, dom, 0.25)
    sup_wide = strip_sup_norm(g, dom, 0.25 + sigma, points_per_axis=64)
    coth = math.cosh(sigma) / math.sinh(sigma)
    assert sup_s <= wfn * (1 + 1e-9)
    assert wfn <= coth ** n * sup_wide * (1 + 1e-9)


# ---------------------------------------------------------------------------
# Hölder norms
# ---------------------------------------------------------------------------

def test_holder_constant():
    f = GridFunction.sample(lambda p: -2.5 * np.ones(p.shape[0]), [action_axis(-1, 1, 64)])
    for ell in (1.0, 2.0, 2.5):
        assert holder_norm_estimate(f, ell).value == pytest.approx(2.5, abs=1e-12)


def test_holder_cosine_c1():
    f = GridFunction.sample(lambda p: np.cos(p[:, 0]), [angle_axis(1024)])
    rep = holder_norm_estimate(f, 1.0)
    assert rep.value == pytest.approx(1.0, abs=1e-4)
    assert rep.resolution == (1024,)
    assert np.isfinite(rep.error_estimate)


def test_holder_odd_sqrt():
    # f(x) = sign(x) |x|^{1/2}: sup |f| = 1, Hölder-1/2 quotient sqrt(2),
    # attained at antipodal pairs; brute-force pairwise quotient is the oracle.
    f = GridFunction.sample(
        lambda p: np.sign(p[:, 0]) * np.sqrt(np.abs(p[:, 0])), [action_axis(-1, 1, 1001)]
    )
    rep = holder_norm_estimate(f, 0.5)
    assert rep.value == pytest.approx(1.0 + math.sqrt(2.0), abs=5e-3)


def test_holder_monotone_in_ell():
    f = GridFunction.sample(lambda p: np.cos(3 * p[:, 0]), [angle_axis(512)])
    v1 = holder_norm_estimate(f, 1.0).value
    v2 = holder_norm_estimate(f, 2.0).value
    assert v1 <= v2 + 1e-12


def test_holder_rejects_bad_inputs():
    f = GridFunction.sample(lambda p: np.cos(p[:, 0]), [angle_axis(64)])
    with pytest.raises(DomainError):
        holder_norm_estimate(f, 0.0)
    tiny = GridFunction.sample(lambda p: p[:, 0], [action_axis(0, 1, 3)])
    with pytest.raises(ResolutionError):
        holder_norm_estimate(tiny, 3.0)


# ---------------------------------------------------------------------------
# Poisson bracket
# ---------------------------------------------------------------------------

def test_bracket_antisymmetry():
    rng = np.random.default_rng(3)
    F = random_real_trigpoly(rng, 2, max_k=2, degree=2, harmonics=4)
    assert poisson_bracket(F, F).coeff_mass() < 1e-12


def test_bracket_harmonic_rotation():
    # h = I_1 (n=1): {h, e^{i theta}} = i e^{i theta}
    h = TrigPoly.from_action_poly(ActionPoly.monomial(1, (1,)))
    e = TrigPoly(1, {(1,): ActionPoly.constant(1, 1.0)})
    br = poisson_bracket(h, e)
    assert set(br.terms) == {(1,)}
    assert br.terms[(1,)].coeffs == {(0,): 1j}


def test_bracket_against_symbolic_oracle():
    # h = |I|^2/2, g = cos(theta1 - theta2) -> -(I1 - I2) sin(theta1 - theta2)
    sympy = pytest.importorskip("sympy")
    I1, I2, t1, t2 = sympy.symbols("I1 I2 t1 t2", real=True)
    hs = (I1**2 + I2**2) / 2
    gs = sympy.cos(t1 - t2)
    bs = sympy.diff(hs, I1) * sympy.diff(gs, t1) + sympy.diff(hs, I2) * sympy.diff(gs, t2) \
        - sympy.diff(hs, t1) * sympy.diff(gs, I1) - sympy.diff(hs, t2) * sympy.diff(gs, I2)
    oracle = sympy.lambdify((I1, I2, t1, t2), sympy.simplify(bs))

    h = TrigPoly.from_action_poly(ActionPoly(2, {(2, 0): 0.5, (0, 2): 0.5}))
    g = TrigPoly.cosine(2, (1, -1))
    br = poisson_bracket(h, g)
    rng = np.random.default_rng(11)
    for _ in range(25):
        I = rng.normal(size=2)
        t = rng.uniform(0, 2 * np.pi, size=2)
        want = oracle(I[0], I[1], t[0], t[1])
        assert br(I, t) == pytest.approx(want, abs=1e-12)
        assert br(I, t) == pytest.approx(-(I[0] - I[1]) * np.sin(t[0] - t[1]), abs=1e-12)


def test_bracket_dimension_mismatch():
    with pytest.raises(DomainError):
        poisson_bracket(TrigPoly.cosine(1, (1,)), TrigPoly.cosine(2, (1, 0)))


def test_bracket_leibniz_rule():
    rng = np.random.default_rng(5)
    for _ in range(8):
        F = random_real_trigpoly(rng, 2, max_k=1, degree=1, harmonics=3)
        G = random_real_trigpoly(rng, 2, max_k=1, degree=1, harmonics=3)
        H = random_real_trigpoly(rng, 2, max_k=1, degree=1, harmonics=3)
        lhs = poisson_bracket(F, G * H)
        rhs = poisson_bracket(F, G) * H + G * poisson_bracket(F, H)
        assert (lhs - rhs).coeff_mass() < 1e-10 * max(1.0, lhs.coeff_mass())


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def test_evaluate_cosine_points():
    g = TrigPoly.cosine(1, (1,))
    assert g([0.0], [0.0]) == pytest.approx(1.0, abs=1e-15)
    assert abs(g([0.0], [np.pi / 2])) < 1e-15


def test_evaluate_matches_naive_summation():
    rng = np.random.default_rng(17)
    g = random_real_trigpoly(rng, 2, max_k=3, degree=2, harmonics=6)
    for _ in range(20):
        I = rng.normal(size=2)
        t = rng.uniform(0, 2 * np.pi, size=2)
        naive = 0.0 + 0.0j
        for k, poly in g.terms.items():
            val = sum(c * I[0] ** p[0] * I[1] ** p[1] for p, c in poly.coeffs.items())
            naive += val * np.exp(1j * (k[0] * t[0] + k[1] * t[1]))
        assert g(I, t) == pytest.approx(naive.real, abs=1e-12 * max(1, g.coeff_mass()))
        assert abs(naive.imag) < 1e-12 * max(1, g.coeff_mass())


def test_reality_invariant_random():
    rng = np.random.default_rng(23)
    for _ in range(10):
        g = random_real_trigpoly(rng, 3, max_k=2, degree=1, harmonics=5)
        assert g.is_real()
        I = rng.normal(size=3)
        t = rng.uniform(0, 2 * np.pi, size=3)
        val = g.evaluate_complex(I.astype(complex), t.astype(complex))
        assert abs(val.imag) < 1e-12 * max(1.0, g.coeff_mass())


# ---------------------------------------------------------------------------
# Fourier decay
# ---------------------------------------------------------------------------

def test_decay_single_harmonic():
    f = GridFunction.sample(lambda p: np.cos(p[:, 0]), [angle_axis(256)])
    rep = fourier_decay_check(f, 1.0, max_order=8)
    # coefficient 1/2, |k| = 1, C^1 norm 1
    assert rep["max_ratio_linf"] == pytest.approx(0.5, abs=1e-3)
    high = [v for k, v in rep["ratios_linf"].items() if abs(k[0]) >= 2]
    assert max(high) < 1e-10


def test_decay_power_law_family():
    ks = np.arange(1, 33)

    def fn(p):
        return sum((1.0 / k**3) * np.cos(k * p[:, 0]) for k in ks)

    f = GridFunction.sample(fn, [angle_axis(512)])
    rep = fourier_decay_check(f, 1.0, max_order=32)
    # closed form: |f_k| = k^{-3}/2, so ratio(k) = k^{-2} / (2 ||f||_{C^1})
    assert rep["max_ratio_linf"] < 10.0
    norm = rep["norm_report"].value
    for k in (1, 2, 4, 8, 16, 32):
        want = (k**-3 / 2) * k / norm
        assert rep["ratios_linf"][(k,)] == pytest.approx(want, rel=1e-2)


def test_decay_triangle_wave():
    def tri(p):
        return (2.0 / np.pi) * np.arcsin(np.sin(p[:, 0]))

    f = GridFunction.sample(tri, [angle_axis(1024)])
    tab = fourier_coefficients(f, 16)
    # closed form: f = (8/pi^2) sum_{m odd} (-1)^{(m-1)/2} sin(m theta)/m^2
    for m in (1, 3, 5, 7):
        want = 4.0 / (np.pi**2 * m**2)
        assert tab.sup_abs((m,)) == pytest.approx(want, rel=1e-3)
    rep = fourier_decay_check(f, 1.0, max_order=16)
    assert np.isfinite(rep["max_ratio_linf"])
    with pytest.raises(DomainError):
        fourier_decay_check(f, 0.5)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_trigpoly_json_roundtrip():
    rng = np.random.default_rng(29)
    g = random_real_trigpoly(rng, 2, max_k=2, degree=2, harmonics=5)
    h = TrigPoly.from_json(g.to_json())
    assert (g - h).coeff_mass() < 1e-15


@pytest.mark.parametrize("payload", ["bin", "csv"])
def test_gridfunction_roundtrip(tmp_path, payload):
    f = GridFunction.sample(
        lambda p: np.cos(p[:, 1]) * p[:, 0], [action_axis(-1, 1, 9), angle_axis(16)]
    )
    header = f.save(tmp_path / "field", payload=payload)
    g = GridFunction.load(header)
    assert g.axes == f.axes
    assert np.allclose(g.values, f.values, atol=1e-15)
