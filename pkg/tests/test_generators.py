import numpy as np
import pytest

from copdep import (
    GroupSplit,
    InsufficientDataError,
    InvalidArgumentError,
    SynthModel,
    comonotone_copula,
    fit_checkerboard,
    generate,
    independence_copula,
    mixture_copula,
    pseudo_observations,
    random_copula,
    random_star_pair,
    tau_quadratic,
)

PAIR = GroupSplit((0,), (1,))


class TestDeterminism:
    def test_same_seed_bit_identical(self):
        model = SynthModel(tag="mixture", theta=0.3, seed=99)
        a = generate(model, 500)
        b = generate(model, 500)
        assert np.array_equal(a, b)

    def test_different_seeds_differ(self):
        a = generate(SynthModel(tag="independent", seed=1), 100)
        b = generate(SynthModel(tag="independent", seed=2), 100)
        assert not np.array_equal(a, b)


class TestModels:
    def test_independent_fits_to_near_zero(self):
        data = generate(SynthModel(tag="independent", dimension=3, seed=5), 20000)
        cop = fit_checkerboard(pseudo_observations(data), (8, 8, 8))
        val = tau_quadratic(cop, GroupSplit((0, 1), (2,))).value
        assert abs(val) < 0.02

    def test_comonotone_columns_identical(self):
        data = generate(SynthModel(tag="comonotone", dimension=3, seed=6), 100)
        assert np.array_equal(data[:, 0], data[:, 1])
        assert np.array_equal(data[:, 0], data[:, 2])

    def test_functional_near_complete_dependence(self):
        data = generate(SynthModel(tag="functional", dimension=3, seed=7), 20000)
        cop = fit_checkerboard(pseudo_observations(data), (32, 32, 32))
        val = tau_quadratic(cop, GroupSplit((0, 1), (2,))).value
        assert val > 0.9

    def test_functional_noise_reduces_dependence(self):
        clean = generate(SynthModel(tag="functional", dimension=2, seed=8), 5000)
        noisy = generate(SynthModel(tag="functional", dimension=2, sigma=2.0, seed=8), 5000)
        t_clean = tau_quadratic(
            fit_checkerboard(pseudo_observations(clean), (10, 10)), PAIR
        ).value
        t_noisy = tau_quadratic(
            fit_checkerboard(pseudo_observations(noisy), (10, 10)), PAIR
        ).value
        assert t_noisy < t_clean

    def test_square_law_nonsymmetry(self):
        data = generate(SynthModel(tag="square_law", seed=9), 20000)
        cop = fit_checkerboard(pseudo_observations(data), (32, 32))
        forward = tau_quadratic(cop, GroupSplit((0,), (1,))).value
        backward = tau_quadratic(cop, GroupSplit((1,), (0,))).value
        assert forward > 0.9
        assert abs(backward - 0.25) < 0.05

    def test_gaussian_requires_positive_definite(self):
        with pytest.raises(InvalidArgumentError):
            SynthModel(
                tag="gaussian",
                dimension=2,
                correlation=((1.0, 1.2), (1.2, 1.0)),
            )

    def test_gaussian_dependence_increases_with_rho(self):
        taus = []
        for rho in (0.0, 0.9):
            model = SynthModel(
                tag="gaussian",
                dimension=2,
                correlation=((1.0, rho), (rho, 1.0)),
                seed=10,
            )
            data = generate(model, 10000)
            cop = fit_checkerboard(pseudo_observations(data), (10, 10))
            taus.append(tau_quadratic(cop, PAIR).value)
        assert taus[0] < 0.05 < taus[1]

    def test_minimum_rows(self):
        with pytest.raises(InsufficientDataError):
            generate(SynthModel(tag="independent", seed=1), 1)

    def test_unknown_tag_rejected(self):
        with pytest.raises(InvalidArgumentError):
            SynthModel(tag="cauchy")

    def test_mixture_theta_validated(self):
        with pytest.raises(InvalidArgumentError):
            SynthModel(tag="mixture", theta=1.5)


class TestMixtureCopula:
    def test_theta_zero_is_independence(self):
        assert np.array_equal(mixture_copula(0.0, 8).mass, independence_copula((8, 8)).mass)

    def test_theta_one_is_comonotone(self):
        assert np.array_equal(mixture_copula(1.0, 8).mass, comonotone_copula(2, 8).mass)

    def test_intermediate_value(self):
        val = tau_quadratic(mixture_copula(0.5, 64), PAIR).value
        assert abs(val - 0.25) < 0.01


class TestRandomCopulas:
    def test_random_copula_validates(self, rng):
        for _ in range(10):
            assert random_copula((3, 4, 5), rng).validate().passed

    def test_star_pair_compatible_by_construction(self, rng):
        from copdep import compatibility_check

        for n in (1, 2):
            a, b = random_star_pair(n, 4, rng)
            assert compatibility_check(a, b, n).passed

    def test_star_pair_shapes(self, rng):
        a, b = random_star_pair(2, 3, rng, target_axes=2)
        assert a.resolutions == (3, 3, 3, 3)
        assert b.resolutions == (3, 3, 3, 3)
