import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nncalc.errors import ConfigError, DomainError, LevelRangeError
from nncalc.generator import (
    ExtendedGenerator,
    Generator,
    clamp_count,
    convex_combine,
    effective_band,
    eval_iterate,
    generator_from_config,
    h_view,
    load_generator,
    make_identity_generator,
    make_sine_generator,
    reset_clamp_count,
    validate_generator,
)

# mpmath (50 digits): sin(pi/8)^2
SINE_QUARTER = 0.14644660940672623779957781894757548
# mpmath (50 digits): sin((pi/2) * sin(pi/8)^2)^2, the two-fold composition at 0.25
SINE_TWOFOLD_QUARTER = 0.051990532036596710274154387914558
# mpmath (50 digits): sin(pi*0.25)/2
H_QUARTER = 0.35355339059327376220042218105242452


def test_sine_fixed_points_exact(sine_gen):
    assert sine_gen.forward(0.0) == 0.0
    assert sine_gen.forward(1.0) == 1.0
    assert sine_gen.forward(0.5) == 0.5
    assert sine_gen.inverse(0.0) == 0.0
    assert sine_gen.inverse(1.0) == 1.0
    assert sine_gen.inverse(0.5) == 0.5


def test_sine_quarter_value(sine_gen):
    assert sine_gen.forward(0.25) == pytest.approx(SINE_QUARTER, abs=1e-15)
    assert sine_gen.inverse(SINE_QUARTER) == pytest.approx(0.25, abs=1e-14)


def test_sine_passes_invariant_suite(sine_gen):
    validate_generator(sine_gen)


def test_identity_passes_invariant_suite():
    validate_generator(make_identity_generator())


@given(st.floats(min_value=0.0, max_value=1.0))
def test_functional_equation(p):
    gen = make_sine_generator()
    assert gen.forward(p) + gen.forward(1.0 - p) == pytest.approx(1.0, abs=1e-12)


@given(st.floats(min_value=-0.5, max_value=0.5))
def test_h_view_is_odd(x):
    gen = make_sine_generator()
    assert h_view(gen, -x) == pytest.approx(-h_view(gen, x), abs=1e-12)


def test_h_view_values(sine_gen):
    assert h_view(sine_gen, 0.0) == 0.0
    assert h_view(sine_gen, 0.5) == pytest.approx(0.5, abs=1e-15)
    assert h_view(sine_gen, 0.25) == pytest.approx(H_QUARTER, abs=1e-13)


def test_h_view_domain(sine_gen):
    with pytest.raises(DomainError):
        h_view(sine_gen, 0.6)


def test_eval_iterate_identity_and_fixed_point(sine_eg):
    assert eval_iterate(sine_eg, 0, 0.7) == 0.7
    assert eval_iterate(sine_eg, -1, 0.5) == 0.5
    assert eval_iterate(sine_eg, 7, 0.5) == 0.5


def test_eval_iterate_twofold(sine_eg):
    assert eval_iterate(sine_eg, 2, 0.25) == pytest.approx(SINE_TWOFOLD_QUARTER, abs=1e-13)


def test_eval_iterate_cap(sine_eg):
    with pytest.raises(LevelRangeError):
        eval_iterate(sine_eg, 65, 0.3)
    with pytest.raises(LevelRangeError):
        sine_eg.iterate(0.3, -9, cap=8)


def test_iterate_roundtrip(sine_eg):
    # Forward orbits approach 0 and 1 super-exponentially; once an iterate
    # comes within an ulp of 1 the double grid can no longer represent it
    # (g^10(0.55) = 1 - 2.6e-18 rounds to 1.0) and no inverse can recover.
    # The round trip is asserted wherever the intermediate stays resolvable;
    # saturated points must absorb exactly onto the fixed endpoint.
    # an iterate at distance d from 1 carries relative error ~ulp/d, so the
    # 1e-9 claim is asserted where d clears 1e-7
    ps = np.linspace(0.0, 1.0, 101)
    for k in range(1, 11):
        mid = np.asarray(eval_iterate(sine_eg, k, ps))
        back = np.asarray(eval_iterate(sine_eg, -k, mid))
        resolvable = np.minimum(mid, 1.0 - mid) > 1e-7
        err = np.abs(back - ps)
        assert np.max(err[resolvable]) < 1e-9, f"k={k}"
        plateau = (mid == 0.0) | (mid == 1.0)
        assert np.all(back[plateau] == mid[plateau])


def test_iterate_roundtrip_contracting_first(sine_eg):
    # Pulling first contracts toward the fixed point 1/2, so this order
    # holds uniformly on the whole interval.
    ps = np.linspace(0.0, 1.0, 101)
    for k in range(1, 11):
        back = eval_iterate(sine_eg, k, eval_iterate(sine_eg, -k, ps))
        assert np.max(np.abs(back - ps)) < 1e-9, f"k={k}"


def test_complement_equation_for_iterates(sine_eg):
    ps = np.linspace(0.0, 1.0, 1001)
    qs = 1.0 - ps
    for k in range(-15, 16):
        resid = np.abs(eval_iterate(sine_eg, k, ps) + eval_iterate(sine_eg, k, qs) - 1.0)
        assert float(np.max(resid)) < 1e-10, f"k={k}"


def test_sign_of_displacement(sine_eg):
    lower = np.linspace(0.001, 0.499, 200)
    upper = 1.0 - lower
    assert np.all(eval_iterate(sine_eg, 1, lower) < lower)
    assert np.all(eval_iterate(sine_eg, 1, upper) > upper)
    # iterates decrease monotonically toward 0 on (0, 1/2)
    cur = lower.copy()
    for _ in range(15):
        nxt = eval_iterate(sine_eg, 1, cur)
        assert np.all(nxt <= cur)
        cur = nxt


def test_extension_fixes_integers(sine_eg):
    for n in range(-10, 11):
        assert sine_eg.forward(float(n)) == float(n)
        assert sine_eg.inverse(float(n)) == float(n)


def test_extension_translation_consistency(sine_eg):
    xs = np.linspace(-5.0, 5.0, 501)
    assert np.max(np.abs(sine_eg.forward(xs + 1.0) - (sine_eg.forward(xs) + 1.0))) < 1e-12


def test_extension_monotone_bijective(sine_eg):
    xs = np.linspace(-10.0, 10.0, 4001)
    ys = sine_eg.forward(xs)
    assert np.all(np.diff(ys) > 0.0)
    assert np.max(np.abs(sine_eg.inverse(ys) - xs)) < 1e-12


def test_custom_extension():
    cubic = ExtendedGenerator(make_sine_generator(),
                              extension=(lambda x: x ** 3, np.cbrt))
    assert cubic.forward(2.0) == 8.0
    assert cubic.inverse(8.0) == 2.0
    assert cubic.forward(0.25) == pytest.approx(SINE_QUARTER, abs=1e-15)


def test_convex_single_component_unchanged(sine_gen):
    combo = convex_combine([sine_gen], [1.0])
    ps = np.linspace(0.0, 1.0, 97)
    assert np.max(np.abs(np.asarray(combo.forward(ps)) - np.asarray(sine_gen.forward(ps)))) == 0.0


def test_convex_fixed_point(sine_gen):
    combo = convex_combine([sine_gen, make_identity_generator()], [0.5, 0.5])
    assert combo.forward(0.5) == pytest.approx(0.5, abs=1e-15)


def test_convex_weighted_average_oracle(sine_gen):
    combo = convex_combine([sine_gen, make_identity_generator()], [0.5, 0.5])
    # independent weighted-average oracle at p = 0.25
    expected = 0.5 * sine_gen.forward(0.25) + 0.5 * 0.25
    assert combo.forward(0.25) == pytest.approx(expected, abs=1e-16)
    assert combo.forward(0.25) == pytest.approx(0.19822330470336311890, abs=1e-14)


def test_convex_inverse_bisection(sine_gen):
    combo = convex_combine([sine_gen, make_identity_generator()], [0.3, 0.7])
    ps = np.linspace(0.0, 1.0, 201)
    back = np.asarray(combo.inverse(combo.forward(ps)))
    assert np.max(np.abs(back - ps)) < 1e-12
    assert combo.inverse(0.0) == 0.0
    assert combo.inverse(1.0) == 1.0


def test_convex_validation():
    sine = make_sine_generator()
    with pytest.raises(DomainError):
        convex_combine([], [])
    with pytest.raises(DomainError):
        convex_combine([sine], [0.5])
    with pytest.raises(DomainError):
        convex_combine([sine, sine], [0.7, 0.4])
    with pytest.raises(DomainError):
        convex_combine([sine, sine], [1.5, -0.5])


def test_convex_random_weights_pass_invariants(rng):
    gens = [make_sine_generator(), make_identity_generator()]
    for _ in range(5):
        w = rng.uniform(0.05, 1.0, size=2)
        w = w / w.sum()
        combo = convex_combine(gens, [float(w[0]), float(w[1])])
        validate_generator(combo, grid_points=2000, tol=1e-12)


def test_effective_band_trivial_resolution(sine_eg):
    report = effective_band(sine_eg, 1.0 - 1e-12)
    assert (report.k_min, report.k_max) == (0, 0)


def test_effective_band_identity(identity_eg):
    report = effective_band(identity_eg, 0.01)
    assert (report.k_min, report.k_max) == (0, 0)
    assert not report.saturated


def test_effective_band_sine(sine_eg):
    report = effective_band(sine_eg, 0.01)
    assert 12 <= report.k_max <= 18
    assert report.k_min <= 0 <= report.k_max


def test_effective_band_saturation(sine_eg):
    report = effective_band(sine_eg, 1e-9, k_cap=5)
    assert report.saturated
    assert report.k_max == 5


def test_effective_band_domain(sine_eg):
    with pytest.raises(DomainError):
        effective_band(sine_eg, 0.0)
    with pytest.raises(DomainError):
        effective_band(sine_eg, 1.5)


def test_clamp_counter():
    # a deliberately overshooting map: forward(1.0) lands just above 1
    wobble = Generator("wobble",
                       forward=lambda p: np.asarray(p, dtype=float) * (1.0 + 4e-16),
                       inverse=lambda P: np.asarray(P, dtype=float) / (1.0 + 4e-16))
    eg = ExtendedGenerator(wobble, extension=(lambda x: x, lambda x: x))
    reset_clamp_count()
    out = eval_iterate(eg, 1, 1.0)
    assert out == 1.0
    assert clamp_count() == 1
    reset_clamp_count()
    assert clamp_count() == 0


def test_generator_from_config():
    gen = generator_from_config("sine")
    assert gen.name == "sine"
    gen = generator_from_config({"name": "identity"})
    assert gen.name == "identity"
    combo = generator_from_config({
        "name": "convex",
        "components": ["sine", {"name": "identity"}],
        "weights": [0.25, 0.75],
    })
    assert combo.forward(0.5) == pytest.approx(0.5, abs=1e-15)


def test_generator_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        generator_from_config({"name": "sine", "wavelength": 2})
    with pytest.raises(ConfigError):
        generator_from_config({"name": "triangular"})
    with pytest.raises(ConfigError):
        generator_from_config({"name": "convex", "components": ["sine"]})
    with pytest.raises(ConfigError):
        generator_from_config({"name": "convex", "components": ["sine"], "weights": [0.5]})
    with pytest.raises(ConfigError):
        generator_from_config(42)


def test_shared_generator_thread_safety(sine_eg):
    # generators are immutable and all operations are pure, so concurrent
    # use of one shared instance must reproduce the serial results
    from concurrent.futures import ThreadPoolExecutor

    ps = np.linspace(0.0, 1.0, 257)
    serial = [np.asarray(eval_iterate(sine_eg, k, ps)) for k in range(-6, 7)]
    with ThreadPoolExecutor(max_workers=8) as pool:
        parallel = list(pool.map(lambda k: np.asarray(eval_iterate(sine_eg, k, ps)),
                                 range(-6, 7)))
    for a, b in zip(serial, parallel):
        assert np.array_equal(a, b)


def test_load_generator_from_file(tmp_path):
    path = tmp_path / "gen.json"
    path.write_text('{"name": "convex", "components": ["sine", "identity"], "weights": [0.5, 0.5]}')
    gen = load_generator(str(path))
    assert gen.name.startswith("convex")
    with pytest.raises(ConfigError):
        load_generator(str(tmp_path / "missing.json"))
