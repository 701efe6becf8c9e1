"""
Tests for helix classification and closed-form synthesis.
"""
import math
import unittest

import numpy as np

from errors import CaseConstraintViolatedError, RejectionError, RejectionReason, ZeroSlopeError
from geometry.catalog import catalog_eval, catalog_grid, catalog_list, catalog_spec
from geometry.frenet import integrate_frenet, make_grid
from geometry.intrinsics import IntrinsicPair, ScalarFunction
from geometry.minkowski import Causal, lorentz_angle, quadratic
from geometry.synthesis import (
    HelixCase, HelixSpec, classify_case, classify_pair, constant_angle_spread, cosine_to_slope,
    frame_closed_form, helix_axis, hyperbola_residual, reduced_ode_residual, slope_angle,
    slope_to_cosine, synthesize, synthesize_parametric, tangent_closed_form, tangent_ode_residual
)
from geometry.verify import max_deviation


def constant_pair(kappa, tau, epsilon):
    return IntrinsicPair(ScalarFunction.constant(kappa), ScalarFunction.constant(tau), epsilon)


class TestClassifyCase(unittest.TestCase):

    def test_examples(self):
        self.assertIs(classify_case(-1, 0.5), HelixCase.TIMELIKE_NORMAL)
        self.assertIs(classify_case(-1, 1.0), HelixCase.TIMELIKE_NORMAL)
        self.assertIs(classify_case(1, 2.0), HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS)
        self.assertIs(classify_case(1, -3.0), HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS)
        self.assertIs(classify_case(1, 0.5), HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS)
        self.assertIs(classify_case(1, 0.0), HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS)
        self.assertIs(classify_case(1, 0.5, Causal.TIMELIKE), HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS)

    def test_rejections(self):
        cases = [
            ((1, 0.0, Causal.SPACELIKE), RejectionReason.PLANAR_SPACELIKE_AXIS),
            ((1, 1.0, None), RejectionReason.DEGENERATE_SLOPE),
            ((1, -1.0, None), RejectionReason.DEGENERATE_SLOPE),
            ((-1, 0.5, Causal.TIMELIKE), RejectionReason.AXIS_MISMATCH),
            ((1, 2.0, Causal.TIMELIKE), RejectionReason.AXIS_MISMATCH),
            ((1, 0.5, Causal.SPACELIKE), RejectionReason.AXIS_MISMATCH),
            ((-1, 0.5, Causal.NULL), RejectionReason.AXIS_MISMATCH),
        ]
        for args, reason in cases:
            with self.subTest(args=args):
                with self.assertRaises(RejectionError) as ctx:
                    classify_case(*args)
                self.assertIs(ctx.exception.reason, reason)
                self.assertEqual(ctx.exception.exit_code, 2)

    def test_invalid_epsilon(self):
        with self.assertRaises(CaseConstraintViolatedError):
            classify_case(0, 0.5)

    def test_sweep(self):
        rng = np.random.default_rng(3)
        for m in rng.uniform(-5.0, 5.0, 1000):
            self.assertIs(classify_case(-1, m), HelixCase.TIMELIKE_NORMAL)
            expected = (HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS if abs(m) > 1
                        else HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS)
            self.assertIs(classify_case(1, m), expected)
            self.assertEqual(classify_case(1, m).axis_character, expected.axis_character)


class TestSlopeConversions(unittest.TestCase):

    def test_inversion(self):
        for case, slopes in (
            (HelixCase.TIMELIKE_NORMAL, (-4.0, -0.3, 0.0, 0.7, 12.0)),
            (HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS, (-5.0, -1.01, 1.5, 40.0)),
            (HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS, (-0.99, -0.2, 0.0, 0.5)),
        ):
            for m in slopes:
                with self.subTest(case=case.label, m=m):
                    n = slope_to_cosine(case, m)
                    self.assertAlmostEqual(cosine_to_slope(case, n), m, delta=1e-9 * max(1.0, abs(m)))

    def test_angles(self):
        self.assertAlmostEqual(slope_angle(HelixCase.TIMELIKE_NORMAL, 0.0), math.pi / 2, places=15)
        self.assertAlmostEqual(slope_angle(HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS, -2.0),
                               math.atanh(0.5), places=15)
        self.assertAlmostEqual(slope_angle(HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS, -0.5),
                               math.atanh(0.5), places=15)
        self.assertEqual(slope_angle(HelixCase.TIMELIKE_NORMAL, -2.0 / 3.0),
                         slope_angle(HelixCase.TIMELIKE_NORMAL, 2.0 / 3.0))
        self.assertAlmostEqual(slope_angle(HelixCase.TIMELIKE_NORMAL, -2.0 / 3.0), math.atan(1.5), places=15)

    def test_negative_slope_angle_matches_lorentz_angle(self):
        for kappa, tau, epsilon in ((3.0, -2.0, -1), (1.0, -2.0, 1), (2.0, -1.0, 1)):
            with self.subTest(kappa=kappa, tau=tau):
                spec = classify_pair(constant_pair(kappa, tau, epsilon))
                self.assertLess(spec.n, 0.0)
                self.assertAlmostEqual(spec.phi, classify_pair(constant_pair(kappa, -tau, epsilon)).phi, places=15)
                for theta in (-0.7, 0.0, 0.3):
                    angle = lorentz_angle(tangent_closed_form(spec, theta), spec.axis)
                    self.assertAlmostEqual(angle.phi, spec.phi, delta=1e-10)

    def test_w_curve_spec(self):
        spec = classify_pair(constant_pair(3.0, 2.0, -1))
        self.assertIs(spec.case, HelixCase.TIMELIKE_NORMAL)
        self.assertAlmostEqual(spec.m, 2.0 / 3.0, places=15)
        self.assertAlmostEqual(spec.n, 2.0 / math.sqrt(13.0), places=15)
        self.assertEqual(spec.describe()['axis'], [0.0, 0.0, 1.0])

    def test_spec_constraints(self):
        pair = constant_pair(3.0, 2.0, -1)
        with self.assertRaises(CaseConstraintViolatedError):
            HelixSpec(HelixCase.TIMELIKE_NORMAL, 2.0 / 3.0, 0.9, 0.1, pair, HelixCase.TIMELIKE_NORMAL.axis)
        with self.assertRaises(CaseConstraintViolatedError):
            HelixSpec(HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS, 0.5, slope_to_cosine(
                HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS, 0.5), 0.5, pair, HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS.axis)

    def test_non_constant_slope(self):
        pair = IntrinsicPair(ScalarFunction.rational_plus(1.0), ScalarFunction.constant(1.0), 1)
        with self.assertRaises(CaseConstraintViolatedError):
            classify_pair(pair)


class TestClosedForms(unittest.TestCase):
    """Synthesized curves against the printed catalog parametrizations."""

    def test_w_curves(self):
        grid = make_grid(-2.0, 2.0, 0.001)
        for name in ('wcurve-case1', 'wcurve-case2', 'wcurve-case3'):
            with self.subTest(name=name):
                samples = synthesize(catalog_spec(name), grid)
                self.assertLess(max_deviation(samples.positions, catalog_eval(name, None, grid)), 1e-9)

    def test_plane_curves(self):
        for name, a, edge in (('plane-case1', 2.0, 1.6), ('plane-case3', 0.5, 1.2)):
            with self.subTest(name=name):
                grid = make_grid(-edge, edge, 0.001)
                samples = synthesize(catalog_spec(name, {'a': a}), grid)
                self.assertLess(max_deviation(samples.positions, catalog_eval(name, {'a': a}, grid)), 1e-8)

    def test_logarithmic_helices(self):
        for name in ('loghelix-case1', 'loghelix-case2', 'loghelix-case3'):
            with self.subTest(name=name):
                grid = catalog_grid(name)
                samples = synthesize(catalog_spec(name), grid)
                self.assertLess(max_deviation(samples.positions, catalog_eval(name, None, grid)), 1e-9)

    def test_gauge_point(self):
        spec = catalog_spec('wcurve-case2')
        samples = synthesize(spec, make_grid(-1.0, 1.0, 0.01), s_ref=0.5)
        np.testing.assert_allclose(samples.positions[150], 0.0, atol=1e-14)
        self.assertEqual(samples.meta['source'], 'synthesis')
        self.assertEqual(samples.meta['s_ref'], 0.5)

    def test_tangent_examples(self):
        spec = catalog_spec('wcurve-case1')
        T = tangent_closed_form(spec, 0.0)
        root = math.sqrt(13.0)
        np.testing.assert_allclose(T.to_list(), [0.0, 3.0 / root, 2.0 / root], atol=1e-15)
        theta = np.linspace(-2.0, 2.0, 101)
        for name in ('wcurve-case1', 'wcurve-case2', 'wcurve-case3', 'plane-case3'):
            with self.subTest(name=name):
                tangents = tangent_closed_form(catalog_spec(name), theta)
                np.testing.assert_allclose(quadratic(tangents), 1.0, atol=1e-12)

    def test_frames_are_pseudo_orthonormal(self):
        theta = np.linspace(-1.5, 1.5, 31)
        for name in ('wcurve-case1', 'wcurve-case2', 'wcurve-case3'):
            with self.subTest(name=name):
                spec = catalog_spec(name)
                frames = frame_closed_form(spec, theta)
                for k in (0, 15, 30):
                    frame = frame_closed_form(spec, theta[k])
                    self.assertLess(frame.residual(), 1e-12)
                    np.testing.assert_allclose(frame.as_matrix(), frames[k], atol=1e-13)


class TestResiduals(unittest.TestCase):

    def setUp(self):
        self.theta = np.linspace(-1.0, 1.0, 2001)

    def test_w_curves(self):
        for name in ('wcurve-case1', 'wcurve-case2', 'wcurve-case3'):
            with self.subTest(name=name):
                spec = catalog_spec(name)
                residual = tangent_ode_residual(spec, self.theta)
                self.assertLess(residual.third_order, 1e-5)
                self.assertLess(residual.reduced, 1e-5)
                self.assertLess(hyperbola_residual(spec, self.theta), 1e-12)

    def test_zero_slope(self):
        spec = catalog_spec('plane-case1')
        with self.assertRaises(ZeroSlopeError) as ctx:
            tangent_ode_residual(spec, self.theta)
        self.assertLess(ctx.exception.details['reduced'], 1e-5)
        self.assertLess(reduced_ode_residual(spec, self.theta), 1e-5)
        self.assertLess(hyperbola_residual(spec, self.theta), 1e-12)


class TestAxis(unittest.TestCase):

    def test_spacelike_axis(self):
        spec = catalog_spec('wcurve-case1')
        samples = synthesize(spec, make_grid(-1.0, 1.0, 0.001))
        axis = helix_axis(samples, spec)
        np.testing.assert_allclose(axis.axis.to_list(), [0.0, 0.0, 1.0], atol=1e-12)
        self.assertLess(axis.variance, 1e-20)
        self.assertAlmostEqual(constant_angle_spread(samples, spec.axis), 0.0, places=15)

    def test_axis_from_positions(self):
        spec = catalog_spec('wcurve-case1')
        samples = synthesize(spec, make_grid(-1.0, 1.0, 0.001)).without_frames()
        np.testing.assert_allclose(helix_axis(samples, spec).axis.to_list(), [0.0, 0.0, 1.0], atol=1e-4)

    def test_timelike_axis_with_mirror(self):
        spec = catalog_spec('wcurve-case3')
        self.assertTrue(spec.mirror)
        samples = synthesize(spec, make_grid(-1.0, 1.0, 0.01))
        np.testing.assert_allclose(helix_axis(samples, spec).axis.to_list(), [1.0, 0.0, 0.0], atol=1e-12)

    def test_planar_curves(self):
        for name, expected in (('plane-case1', [0.0, 0.0, 1.0]), ('plane-case3', [1.0, 0.0, 0.0])):
            with self.subTest(name=name):
                spec = catalog_spec(name)
                samples = synthesize(spec, make_grid(-0.4, 0.4, 0.01))
                np.testing.assert_allclose(helix_axis(samples, spec).axis.to_list(), expected, atol=1e-12)


class TestMirrorAndParametric(unittest.TestCase):

    def test_mirror_flips_odd_coordinate(self):
        pair = constant_pair(2.0, 1.0, 1)
        plain, mirrored = classify_pair(pair), classify_pair(pair, mirror=True)
        self.assertEqual(mirrored.orientation, -plain.orientation)
        grid = make_grid(-1.0, 1.0, 0.01)
        a, b = synthesize(plain, grid).positions, synthesize(mirrored, grid).positions
        np.testing.assert_array_equal(a[:, :2], b[:, :2])
        np.testing.assert_array_equal(a[:, 2], -b[:, 2])

    def test_parametric_matches_arclength_form(self):
        for name, window in (('wcurve-case1', (-1.0, 1.0)), ('loghelix-case3', (0.5, 3.0))):
            with self.subTest(name=name):
                spec = catalog_spec(name)
                grid = make_grid(window[0], window[1], 0.01)
                theta = spec.pair.kappa.theta(grid)
                parametric = synthesize_parametric(spec, theta)
                np.testing.assert_allclose(parametric.s, grid, atol=1e-12)
                np.testing.assert_allclose(parametric.positions, synthesize(spec, grid).positions, atol=1e-9)


class TestConstantAngle(unittest.TestCase):

    def test_catalog_helices(self):
        for entry in catalog_list():
            with self.subTest(name=entry.name):
                spec = catalog_spec(entry.name)
                lo, hi = entry.window(entry.resolve())
                grid = np.linspace(lo, hi, 1001)
                self.assertLess(constant_angle_spread(synthesize(spec, grid), spec.axis), 1e-10)
                tangents = tangent_closed_form(spec, spec.pair.kappa.theta(grid))
                for T in tangents[::50]:
                    self.assertAlmostEqual(lorentz_angle(T, spec.axis).phi, spec.phi, delta=1e-8)


def frenet_deviation(spec, grid, start):
    s0 = float(grid[start])
    initial = frame_closed_form(spec, spec.pair.kappa.theta(s0))
    oracle = integrate_frenet(spec.pair, initial, (0.0, 0.0, 0.0), grid, s0=s0)
    return float(np.max(np.abs(oracle.positions - synthesize(spec, grid, s_ref=s0).positions)))


class TestVariableCurvature(unittest.TestCase):
    """Synthesis away from constant curvature against RK4 integration."""

    def test_reciprocal_curvature(self):
        pair = IntrinsicPair(ScalarFunction.reciprocal(2.0), ScalarFunction.reciprocal(1.0), -1)
        spec = classify_pair(pair)
        grid = make_grid(0.5, 2.0, 0.001)
        self.assertLess(frenet_deviation(spec, grid, 500), 1e-6)
        self.assertLess(synthesize(spec, grid).speed_residual(), 1e-5)

    def test_resonant_reciprocal_curvature(self):
        # 1/h equals the hyperbolic rate sqrt(1 + m^2) = 5/4
        pair = IntrinsicPair(ScalarFunction.reciprocal(0.8), ScalarFunction.reciprocal(0.6), -1)
        spec = classify_pair(pair)
        self.assertAlmostEqual(spec.rate, 1.25, places=15)
        grid = make_grid(0.5, 2.0, 0.001)
        self.assertLess(frenet_deviation(spec, grid, 500), 1e-6)
        self.assertLess(synthesize(spec, grid).speed_residual(), 1e-5)

    def test_rational_curvature(self):
        spec = catalog_spec('plane-case1')
        grid = make_grid(-1.6, 1.6, 0.001)
        self.assertLess(frenet_deviation(spec, grid, 1600), 1e-6)


if __name__ == '__main__':
    unittest.main()
