"""Tests for the Backlund transformations covering the Weyl reflections."""

import numpy as np
import pytest

from pvi import backlund, flow, fuchsian, params


def _random_point(rng, kappa_scale=0.3):
    k = params.Exponents.from_free(*(rng.normal(size=4) * kappa_scale))
    t = rng.normal(size=3) + 1j * rng.normal(size=3)
    while min(abs(t[i] - t[j]) for i in range(3) for j in range(i + 1, 3)) < 0.5:
        t = rng.normal(size=3) + 1j * rng.normal(size=3)
    q = complex(rng.normal(), rng.normal())
    p = complex(rng.normal(), rng.normal())
    while min(abs(q - ti) for ti in t) < 0.1 or abs(p) < 0.1:
        q = complex(rng.normal(), rng.normal())
        p = complex(rng.normal(), rng.normal())
    return fuchsian.PhasePoint.make(q, p, t, k)


def _dist(a, b):
    return max(
        abs(a.q - b.q),
        abs(a.p - b.p),
        float(np.max(np.abs(a.kappa.as_array() - b.kappa.as_array()))),
    )


class TestGroupRelations:
    """The transformations realize the affine Weyl group on phase space."""

    def setup_method(self):
        self.rng = np.random.default_rng(11)

    def test_involutions(self):
        for _ in range(100):
            pt = _random_point(self.rng)
            for i in range(5):
                assert _dist(backlund.apply_word([i, i], pt), pt) < 1e-10

    def test_central_coxeter_relations(self):
        """(s0 si)^3 = id for every leg index i."""
        for _ in range(25):
            pt = _random_point(self.rng)
            for i in range(1, 5):
                assert _dist(backlund.apply_word([0, i] * 3, pt), pt) < 1e-10

    def test_commuting_coxeter_relations(self):
        """(si sj)^2 = id for distinct leg indices."""
        for _ in range(25):
            pt = _random_point(self.rng)
            for i in range(1, 5):
                for j in range(1, 5):
                    if i != j:
                        assert _dist(backlund.apply_word([i, j] * 2, pt), pt) < 1e-10


class TestParameterAction:
    def setup_method(self):
        self.rng = np.random.default_rng(12)

    def test_kappa_part_matches_weyl_reflection_exactly(self):
        for _ in range(50):
            pt = _random_point(self.rng)
            for i in range(5):
                out = backlund.apply_basic(i, pt)
                want = params.weyl_reflect(i, pt.kappa).as_array()
                assert np.max(np.abs(out.kappa.as_array() - want)) == 0.0

    def test_rh_parameters_are_invariant(self):
        """theta(kappa) is a Weyl invariant, so it survives every s_i."""
        for _ in range(50):
            pt = _random_point(self.rng)
            th = params.rh_param(pt.kappa)
            for i in range(5):
                out = backlund.apply_basic(i, pt)
                assert np.max(np.abs(params.rh_param(out.kappa) - th)) < 1e-12

    def test_time_configuration_is_untouched(self):
        pt = _random_point(self.rng)
        for i in range(5):
            out = backlund.apply_basic(i, pt)
            assert np.max(np.abs(np.asarray(out.t) - np.asarray(pt.t))) == 0.0


def test_central_transformation_closed_form():
    # s0 shifts q by k0/p and keeps p; here 1 + 1/2 = 1.5
    k = params.Exponents(1.0, -0.3, -0.2, -0.1, -0.4)
    pt = fuchsian.PhasePoint.make(1.0, 2.0, (0.0, 2.5, 4.0), k)
    out = backlund.apply_basic(0, pt)
    assert abs(out.q - 1.5) < 1e-15
    assert abs(out.p - 2.0) < 1e-15
    assert out.kappa.k0 == -1.0


def test_leg_transformation_closed_form():
    # s1 shifts p by -k1/(q - t1) and keeps q
    k = params.Exponents.from_free(0.5, 0.1, 0.2, 0.3)
    pt = fuchsian.PhasePoint.make(2.0, 0.25, (0.0, 1.0, 3.0), k)
    out = backlund.apply_basic(1, pt)
    assert abs(out.q - 2.0) < 1e-15
    assert abs(out.p - (0.25 - 0.5 / 2.0)) < 1e-15


def test_vanishing_exponent_acts_as_identity():
    k0_zero = params.Exponents.from_free(0.23, 0.31, 0.17, 0.29)
    pt = fuchsian.PhasePoint.make(0.4 + 0.3j, 0.0, (0.0, 1.0, 2.0), k0_zero)
    out = backlund.apply_basic(0, pt)
    assert out.q == pt.q and out.p == pt.p


def test_pole_of_central_transformation_raises():
    """s0 with k0 != 0 is undefined at p = 0."""
    k = params.Exponents.from_free(0.21, 0.33, 0.17, 0.11)
    pt = fuchsian.PhasePoint.make(0.4 + 0.3j, 0.0, (0.0, 1.0, 2.0), k)
    with pytest.raises(backlund.PoleOfTransformationError):
        backlund.apply_basic(0, pt)


def test_word_parsing_and_application():
    rng = np.random.default_rng(13)
    pt = _random_point(rng)
    assert _dist(backlund.apply_word("00", pt), pt) < 1e-10
    assert _dist(backlund.apply_word("0 1 0 1 0 1", pt), pt) < 1e-10
    with pytest.raises(ValueError):
        backlund.apply_word("5", pt)


def test_word_error_carries_step_index():
    k = params.Exponents.from_free(0.21, 0.33, 0.17, 0.11)
    pt = fuchsian.PhasePoint.make(0.4 + 0.3j, 0.0, (0.0, 1.0, 2.0), k)
    with pytest.raises(backlund.PoleOfTransformationError) as info:
        backlund.apply_word([4, 0], pt)  # the pole occurs at the second letter
    assert info.value.step == 1


class TestEquivariance:
    """Transforming then flowing agrees with flowing then transforming."""

    def setup_method(self):
        k = params.Exponents.from_free(0.21, 0.33, 0.17, 0.11)
        self.pt = fuchsian.PhasePoint.make(0.4 + 0.3j, 0.2 - 0.5j, (0.0, 1.0, 2.0), k)
        self.path = flow.TimePath.make([(0, 1, 2), (0, 1, 2.3 + 0.2j)])

    @pytest.mark.parametrize("index", [0, 1, 2, 3, 4])
    def test_each_basic_transformation(self, index):
        rep = backlund.check_equivariance(index, self.pt, self.path)
        assert rep.index == index
        assert rep.passed(1e-6)
        assert rep.deviation < 1e-6

    def test_gauge_invariance_of_monodromy(self):
        """rh_point is unchanged by every basic transformation."""
        x_ref = fuchsian.rh_point(self.pt)
        for i in range(5):
            x_i = fuchsian.rh_point(backlund.apply_basic(i, self.pt))
            assert np.max(np.abs(x_i.x - x_ref.x)) < 1e-5
