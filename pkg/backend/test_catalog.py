"""
Tests for the printed-formula catalog and its three-way check.
"""
import unittest

import numpy as np

from errors import OutOfValidityError, UnknownEntryError
from geometry.catalog import (
    catalog_eval, catalog_get, catalog_grid, catalog_list, catalog_samples, catalog_spec,
    catalog_validate
)
from geometry.frenet import make_grid
from geometry.minkowski import LorentzVector
from geometry.synthesis import HelixCase
from geometry.verify import Verdict


class TestEntries(unittest.TestCase):

    def test_names_and_defaults(self):
        entries = {e.name: e for e in catalog_list()}
        self.assertEqual(list(entries), [
            'plane-case1', 'plane-case3', 'wcurve-case1', 'wcurve-case2', 'wcurve-case3',
            'loghelix-case1', 'loghelix-case2', 'loghelix-case3',
        ])
        self.assertEqual(dict(entries['wcurve-case1'].default_params), {'kappa': 3.0, 'tau': 2.0})
        self.assertEqual(dict(entries['loghelix-case2'].default_params), {'h': 1.0, 'r': 4.0})
        self.assertIs(entries['loghelix-case3'].case, HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS)
        self.assertTrue(entries['wcurve-case3'].mirror)

    def test_default_specs_match_entry_case(self):
        for entry in catalog_list():
            with self.subTest(name=entry.name):
                self.assertIs(catalog_spec(entry.name).case, entry.case)

    def test_summary(self):
        summary = catalog_get('plane-case1').summary()
        self.assertEqual(summary['case'], 'Case1_TimelikeNormal')
        self.assertEqual(summary['params'], ['a'])

    def test_unknown_entry(self):
        with self.assertRaises(UnknownEntryError):
            catalog_get('spiral')


class TestEval(unittest.TestCase):

    def test_printed_values(self):
        self.assertEqual(catalog_eval('wcurve-case1', None, 0.0),
                         LorentzVector(3.0 / 13.0, 0.0, 0.0))
        np.testing.assert_allclose(catalog_eval('wcurve-case3', None, 0.0).to_list(),
                                   [0.0, 0.0, 2.0 / 3.0], atol=1e-15)
        np.testing.assert_allclose(catalog_eval('plane-case1', {'a': 2.0}, 0.0).to_list(),
                                   [-2.0, 0.0, 0.0], atol=1e-15)

    def test_array_argument(self):
        out = catalog_eval('wcurve-case2', {'kappa': 1.0, 'tau': 2.0}, np.array([0.0, 1.0]))
        self.assertEqual(out.shape, (2, 3))
        self.assertAlmostEqual(out[0, 1], 1.0 / 3.0, places=15)

    def test_outside_validity(self):
        with self.assertRaises(OutOfValidityError):
            catalog_eval('plane-case1', {'a': 2.0}, 2.0)
        with self.assertRaises(OutOfValidityError):
            catalog_eval('loghelix-case1', None, -1.0)
        with self.assertRaises(OutOfValidityError):
            catalog_eval('wcurve-case2', {'tau': 0.5}, 0.0)
        with self.assertRaises(OutOfValidityError):
            catalog_eval('wcurve-case1', {'omega': 1.0}, 0.0)

    def test_samples_and_grid(self):
        self.assertEqual(len(catalog_grid('wcurve-case1')), 4001)
        samples = catalog_samples('loghelix-case1', {'h': 2.0, 'r': 1.0})
        self.assertEqual(samples.epsilon, -1)
        self.assertEqual(samples.s[0], 0.5)
        self.assertEqual(samples.meta['name'], 'loghelix-case1')
        self.assertEqual(samples.meta['h'], 2.0)


class TestValidate(unittest.TestCase):

    def test_w_curve_consistent(self):
        report = catalog_validate('wcurve-case1', {'kappa': 3.0, 'tau': 2.0})
        self.assertIs(report.status, Verdict.CONSISTENT)
        self.assertEqual(report.exit_code, 0)
        self.assertEqual(report.points, 4001)
        self.assertLess(report.deviations['closed_form_vs_synthesis'], 1e-6)
        self.assertLess(report.deviations['closed_form_vs_frenet'], 1e-6)
        self.assertLess(report.deviations['frame_drift'], 1e-6)
        self.assertLess(report.speed_residual, 1e-5)

    def test_plane_curve_consistent(self):
        report = catalog_validate('plane-case1')
        self.assertTrue(report.consistent, report.notes)
        self.assertEqual(report.helix['case'], 'Case1_TimelikeNormal')

    def test_tight_tolerance_is_discrepant(self):
        report = catalog_validate('wcurve-case1', tol=1e-30)
        self.assertIs(report.status, Verdict.DISCREPANT)
        self.assertEqual(report.exit_code, 3)
        self.assertTrue(report.notes)

    def test_logarithmic_reports_are_deterministic(self):
        for name in ('loghelix-case1', 'loghelix-case2', 'loghelix-case3'):
            with self.subTest(name=name):
                first, second = catalog_validate(name), catalog_validate(name)
                self.assertIn(first.status, (Verdict.CONSISTENT, Verdict.DISCREPANT))
                self.assertEqual(first.status, second.status)
                self.assertEqual(first.deviations, second.deviations)
                self.assertEqual(first.notes, second.notes)

    def test_every_entry_consistent(self):
        for entry in catalog_list():
            with self.subTest(name=entry.name):
                report = catalog_validate(entry.name)
                self.assertIs(report.status, Verdict.CONSISTENT, report.notes)
                if not entry.name.startswith('loghelix'):
                    for key in ('closed_form_vs_synthesis', 'closed_form_vs_frenet', 'synthesis_vs_frenet'):
                        self.assertLess(report.deviations[key], 1e-6, key)
                self.assertLess(report.deviations['frame_drift'], 1e-6)

    def test_explicit_grid(self):
        grid = make_grid(-1.0, 1.5, 0.002)
        report = catalog_validate('wcurve-case2', s_grid=grid)
        self.assertTrue(report.consistent, report.notes)
        self.assertEqual(report.points, len(grid))


if __name__ == '__main__':
    unittest.main()
