"""
Tests for curvature and torsion functions and the theta reparameterization.
"""
import math
import os
import tempfile
import unittest

import numpy as np
from scipy.integrate import quad

from errors import InadmissibleFunctionError, OutOfDomainError, OutOfRangeError, SamplesFormatError
from geometry.intrinsics import (
    Family, IntrinsicPair, NonConstant, ScalarFunction, load_tabulated, parse_descriptor,
    ratio, s_of_theta, theta_of_s
)


class TestTheta(unittest.TestCase):
    """theta_of_s and s_of_theta for the closed-form families."""

    def test_constant(self):
        kappa = ScalarFunction.constant(3.0)
        self.assertAlmostEqual(theta_of_s(kappa, 0.7), 2.1, places=14)
        self.assertAlmostEqual(s_of_theta(ScalarFunction.constant(2.0), 1.0), 0.5, places=15)

    def test_rational_plus(self):
        kappa = ScalarFunction.rational_plus(0.5)
        self.assertAlmostEqual(theta_of_s(kappa, 0.3), math.atan(0.3 / 0.5), places=14)
        self.assertAlmostEqual(s_of_theta(ScalarFunction.rational_plus(1.0), math.pi / 4), 1.0, places=14)

    def test_rational_minus(self):
        kappa = ScalarFunction.rational_minus(2.0)
        self.assertAlmostEqual(theta_of_s(kappa, 1.5), math.atanh(0.75), places=14)
        self.assertAlmostEqual(s_of_theta(kappa, 1.2), 2.0 * math.tanh(1.2), places=14)

    def test_reciprocal(self):
        kappa = ScalarFunction.reciprocal(2.0)
        self.assertEqual(kappa.reference, 1.0)
        self.assertAlmostEqual(theta_of_s(kappa, 3.0), 2.0 * math.log(3.0), places=14)
        self.assertAlmostEqual(s_of_theta(kappa, 1.0), math.exp(0.5), places=14)

    def test_round_trip(self):
        rng = np.random.default_rng(7)
        cases = [
            (ScalarFunction.constant(1.7), rng.uniform(-5, 5, 1000)),
            (ScalarFunction.rational_minus(2.0), rng.uniform(-1.9, 1.9, 1000)),
            (ScalarFunction.rational_plus(0.5), rng.uniform(-5, 5, 1000)),
            (ScalarFunction.reciprocal(2.0), rng.uniform(0.1, 5, 1000)),
        ]
        for kappa, s in cases:
            with self.subTest(family=kappa.family.value):
                back = s_of_theta(kappa, theta_of_s(kappa, s))
                np.testing.assert_allclose(back, s, rtol=0, atol=1e-10)

    def test_closed_forms_match_quadrature(self):
        rng = np.random.default_rng(11)
        for kappa, lo, hi in (
            (ScalarFunction.rational_minus(2.0), -1.8, 1.8),
            (ScalarFunction.rational_plus(0.5), -3.0, 3.0),
            (ScalarFunction.reciprocal(2.0), 0.2, 4.0),
        ):
            for s in rng.uniform(lo, hi, 100):
                value, _ = quad(kappa, kappa.reference, s, epsabs=1e-13, epsrel=1e-13)
                self.assertAlmostEqual(kappa.theta(s), value, delta=1e-9)

    def test_theta_increasing(self):
        for kappa in (ScalarFunction.rational_minus(2.0), ScalarFunction.rational_plus(0.5)):
            lo, hi = kappa.sample_interval()
            theta = kappa.theta(np.linspace(lo, hi, 2001))
            self.assertTrue(np.all(np.diff(theta) > 0))

    def test_out_of_domain(self):
        with self.assertRaises(OutOfDomainError):
            ScalarFunction.rational_minus(2.0).theta(2.0)
        with self.assertRaises(OutOfDomainError):
            ScalarFunction.reciprocal(1.0)(-1.0)

    def test_out_of_range(self):
        with self.assertRaises(OutOfRangeError):
            ScalarFunction.rational_plus(1.0).s_of_theta(2.0)


class TestTabulated(unittest.TestCase):

    def setUp(self):
        self.grid = np.linspace(0.0, 2.0, 41)
        self.kappa = ScalarFunction.tabulated(self.grid, 1.0 + self.grid ** 2)

    def test_reference_and_theta(self):
        self.assertEqual(self.kappa.reference, 0.0)
        # the spline reproduces quadratics up to interpolation error
        self.assertAlmostEqual(self.kappa.theta(1.5), 1.5 + 1.5 ** 3 / 3, delta=1e-4)

    def test_inverse(self):
        s = np.array([0.1, 0.9, 1.7])
        np.testing.assert_allclose(self.kappa.s_of_theta(self.kappa.theta(s)), s, atol=1e-10)

    def test_no_extrapolation(self):
        with self.assertRaises(OutOfDomainError):
            self.kappa(2.5)

    def test_mixed_sign_rejected(self):
        with self.assertRaises(InadmissibleFunctionError):
            ScalarFunction.tabulated([0.0, 1.0, 2.0], [-1.0, 0.5, 1.0])

    def test_load_from_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'kappa.csv')
            with open(path, 'w') as fh:
                fh.write('s,value\n')
                for s in self.grid:
                    fh.write(f'{s:.17g},{1.0 + s * s:.17g}\n')
            loaded = load_tabulated(path)
            self.assertIs(loaded.family, Family.TABULATED)
            self.assertAlmostEqual(loaded(1.0), 2.0, places=12)
            self.assertEqual(parse_descriptor(f'table:{path}').describe(), f'table:{path}')

    def test_bad_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'bad.csv')
            with open(path, 'w') as fh:
                fh.write('0,1,2\n1,2,3\n')
            with self.assertRaises(SamplesFormatError):
                load_tabulated(path)


class TestRatio(unittest.TestCase):

    def test_w_curve(self):
        pair = IntrinsicPair(ScalarFunction.constant(3.0), ScalarFunction.constant(2.0), -1)
        self.assertAlmostEqual(ratio(pair), 2.0 / 3.0, places=15)

    def test_logarithmic(self):
        pair = IntrinsicPair(ScalarFunction.reciprocal(2.0), ScalarFunction.reciprocal(1.0), -1)
        self.assertAlmostEqual(ratio(pair), 0.5, places=12)

    def test_non_constant(self):
        grid = np.linspace(1.0, 2.0, 11)
        pair = IntrinsicPair(ScalarFunction.constant(1.0), ScalarFunction.tabulated(grid, grid), 1)
        self.assertIsInstance(ratio(pair), NonConstant)

    def test_pair_domain_is_intersection(self):
        pair = IntrinsicPair(ScalarFunction.rational_minus(2.0),
                             ScalarFunction.constant(0.0, domain=(-1.0, 5.0)), -1)
        self.assertEqual(pair.domain, (-1.0, 2.0))

    def test_pair_requires_positive_curvature(self):
        with self.assertRaises(InadmissibleFunctionError):
            IntrinsicPair(ScalarFunction.constant(-1.0), ScalarFunction.constant(1.0), 1)
        with self.assertRaises(InadmissibleFunctionError):
            IntrinsicPair(ScalarFunction.constant(1.0), ScalarFunction.constant(1.0), 0)


class TestDescriptors(unittest.TestCase):

    def test_families(self):
        self.assertEqual(parse_descriptor('const:3').describe(), 'const:3')
        self.assertEqual(parse_descriptor('rminus:2').domain, (-2.0, 2.0))
        self.assertEqual(parse_descriptor('recip:-1').domain, (-math.inf, 0.0))
        self.assertIs(parse_descriptor('rplus:0.5').family, Family.RATIONAL_PLUS)

    def test_malformed(self):
        for text in ('const', 'const:x', 'spiral:1'):
            with self.subTest(text=text):
                with self.assertRaises(InadmissibleFunctionError):
                    parse_descriptor(text)


if __name__ == '__main__':
    unittest.main()
