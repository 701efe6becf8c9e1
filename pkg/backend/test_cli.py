"""
Tests for the lorhelix command line.
"""
import json
import logging
import os
import tempfile
import unittest

import pandas as pd
from click.testing import CliRunner

from cli import cli
from geometry.catalog import catalog_list


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self.runner = CliRunner()
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()
        # setup_logging binds the runner's stderr, which is closed after each invoke
        for handler in logging.root.handlers[:]:
            logging.root.removeHandler(handler)

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def invoke(self, *args):
        return self.runner.invoke(cli, list(args))

    def synth_w1(self, name='w1.csv'):
        return self.invoke('synth', '--kappa', 'const:3', '--tau', 'const:2', '--epsilon=-1',
                           '--s=-2:2:0.001', '--out', self.path(name))


class TestSynth(CliTestCase):

    def test_writes_standard_grid(self):
        result = self.synth_w1()
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn('case: Case1_TimelikeNormal', result.output)
        self.assertIn('axis: (0, 0, 1) spacelike', result.output)
        df = pd.read_csv(self.path('w1.csv'))
        self.assertEqual(len(df), 4001)
        self.assertEqual(list(df.columns), ['s', 'x1', 'x2', 'x3'])

    def test_description_only(self):
        result = self.invoke('synth', '--kappa', 'const:2', '--tau', 'const:1', '--epsilon=1')
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn('case: Case3_SpacelikeNormal_TimelikeAxis', result.output)
        self.assertEqual(os.listdir(self.tmp.name), [])

    def test_json_with_frames(self):
        result = self.invoke('synth', '--kappa', 'const:1', '--tau', 'const:2', '--epsilon=1',
                             '--s=0:1:0.1', '--frames', '--out', self.path('w2.json'))
        self.assertEqual(result.exit_code, 0, result.output)
        with open(self.path('w2.json')) as fh:
            doc = json.load(fh)
        self.assertEqual(len(doc['s']), 11)
        self.assertEqual(len(doc['frames']), 11)
        self.assertEqual(doc['epsilon'], 1)

    def test_rejections(self):
        result = self.invoke('synth', '--kappa', 'const:1', '--tau', 'const:0', '--epsilon=1',
                             '--axis', 'spacelike')
        self.assertEqual(result.exit_code, 2)
        self.assertIn('PLANAR_SPACELIKE_AXIS', result.output)
        result = self.invoke('synth', '--kappa', 'const:1', '--tau', 'const:1', '--epsilon=1')
        self.assertEqual(result.exit_code, 2)
        self.assertIn('DEGENERATE_SLOPE', result.output)

    def test_invalid_arguments(self):
        result = self.invoke('synth', '--kappa', 'const:1', '--epsilon=1')
        self.assertEqual(result.exit_code, 1)
        self.assertIn('Error:', result.output)
        result = self.invoke('synth', '--kappa', 'const:1', '--tau', 'const:1', '--epsilon=2')
        self.assertEqual(result.exit_code, 1)
        result = self.invoke('synth', '--kappa', 'const:1', '--tau', 'const:0.5', '--epsilon=1',
                             '--s=1:0:0.1', '--out', self.path('x.csv'))
        self.assertEqual(result.exit_code, 1)


class TestVerify(CliTestCase):

    def test_catalog_entry(self):
        result = self.invoke('verify', '--name', 'wcurve-case1', '--params', 'kappa=3,tau=2',
                             '--out', self.path('report.json'))
        self.assertEqual(result.exit_code, 0, result.output)
        with open(self.path('report.json')) as fh:
            report = json.load(fh)
        self.assertEqual(report['status'], 'CONSISTENT')
        self.assertEqual(report['points'], 4001)

    def test_synthesized_file(self):
        self.assertEqual(self.synth_w1().exit_code, 0)
        result = self.invoke('verify', '--input', self.path('w1.csv'), '--kappa', 'const:3',
                             '--tau', 'const:2', '--out', self.path('report.json'))
        self.assertEqual(result.exit_code, 0, result.output)
        with open(self.path('report.json')) as fh:
            self.assertEqual(json.load(fh)['recovery']['epsilon_hat'], -1)

    def test_wrong_pair_is_discrepant(self):
        self.assertEqual(self.synth_w1().exit_code, 0)
        result = self.invoke('verify', '--input', self.path('w1.csv'), '--kappa', 'const:3',
                             '--tau', 'const:1')
        self.assertEqual(result.exit_code, 3)

    def test_truncated_file(self):
        with open(self.path('cut.csv'), 'w') as fh:
            fh.write('s,x1,x2,x3\n0.0,0.2,0.0,0.0\n0.001,0.2\n')
        result = self.invoke('verify', '--input', self.path('cut.csv'), '--kappa', 'const:3',
                             '--tau', 'const:2', '--epsilon=-1')
        self.assertEqual(result.exit_code, 1)
        self.assertIn('Error:', result.output)

    def test_unknown_entry(self):
        self.assertEqual(self.invoke('verify', '--name', 'spiral').exit_code, 1)

    def test_catalog_grid_is_used(self):
        result = self.invoke('verify', '--name', 'wcurve-case2', '--s=-1:1.5:0.002',
                             '--out', self.path('report.json'))
        self.assertEqual(result.exit_code, 0, result.output)
        with open(self.path('report.json')) as fh:
            self.assertEqual(json.load(fh)['points'], 1251)

    def test_every_entry_round_trips(self):
        pairs = {
            'plane-case1': ('rminus:2', 'const:0', '-1', '-1.6:1.6:0.001'),
            'plane-case3': ('rplus:0.5', 'const:0', '1', '-1.2:1.2:0.001'),
            'wcurve-case1': ('const:3', 'const:2', '-1', '-2:2:0.001'),
            'wcurve-case2': ('const:1', 'const:2', '1', '-2:2:0.001'),
            'wcurve-case3': ('const:2', 'const:1', '1', '-2:2:0.001'),
            'loghelix-case1': ('recip:2', 'recip:1', '-1', '0.5:3:0.001'),
            'loghelix-case2': ('recip:1', 'recip:4', '1', '0.5:3:0.001'),
            'loghelix-case3': ('recip:6', 'recip:1', '1', '0.5:3:0.001'),
        }
        self.assertEqual(sorted(pairs), sorted(e.name for e in catalog_list()))
        for name, (kappa, tau, epsilon, grid) in pairs.items():
            with self.subTest(name=name):
                out = self.path(f'{name}.csv')
                result = self.invoke('synth', '--kappa', kappa, '--tau', tau, f'--epsilon={epsilon}',
                                     f'--s={grid}', '--out', out)
                self.assertEqual(result.exit_code, 0, result.output)
                result = self.invoke('verify', '--input', out, '--kappa', kappa, '--tau', tau,
                                     f'--epsilon={epsilon}')
                self.assertEqual(result.exit_code, 0, result.output)

    def test_default_grid_avoids_pole(self):
        result = self.invoke('synth', '--kappa', 'recip:2', '--tau', 'recip:1', '--epsilon=-1',
                             '--out', self.path('log.csv'))
        self.assertEqual(result.exit_code, 0, result.output)
        df = pd.read_csv(self.path('log.csv'))
        self.assertAlmostEqual(df['s'].iloc[0], 0.5, places=12)
        self.assertAlmostEqual(df['s'].iloc[-1], 2.0, places=12)
        result = self.invoke('verify', '--input', self.path('log.csv'), '--kappa', 'recip:2',
                             '--tau', 'recip:1', '--epsilon=-1')
        self.assertEqual(result.exit_code, 0, result.output)


class TestAudit(CliTestCase):

    def test_reports_every_entry(self):
        result = self.invoke('audit', '--out-dir', self.path('reports'))
        self.assertEqual(result.exit_code, 0, result.output)
        names = [e.name for e in catalog_list()]
        self.assertEqual(sorted(os.listdir(self.path('reports'))), sorted(f'{n}.json' for n in names))
        for name in names:
            with open(os.path.join(self.path('reports'), f'{name}.json')) as fh:
                report = json.load(fh)
            self.assertEqual(report['subject'], name)
            self.assertEqual(report['status'], 'CONSISTENT')
            self.assertIn(name, result.output)

    def test_reports_are_deterministic(self):
        contents = []
        for run in ('first', 'second'):
            self.assertEqual(self.invoke('audit', '--out-dir', self.path(run)).exit_code, 0)
            with open(os.path.join(self.path(run), 'loghelix-case2.json'), 'rb') as fh:
                contents.append(fh.read())
        self.assertEqual(contents[0], contents[1])

    def test_tight_tolerance(self):
        result = self.invoke('audit', '--out-dir', self.path('reports'), '--tol', '1e-30')
        self.assertEqual(result.exit_code, 3)
        self.assertIn('DISCREPANT', result.output)


class TestCatalogAndPlot(CliTestCase):

    def test_list(self):
        result = self.invoke('list')
        self.assertEqual(result.exit_code, 0)
        lines = result.output.strip().splitlines()
        self.assertEqual(len(lines), 8)
        self.assertTrue(lines[0].startswith('plane-case1'))

    def test_catalog_samples(self):
        result = self.invoke('catalog', '--name', 'loghelix-case1', '--params', 'h=2,r=1',
                             '--out', self.path('log1.json'))
        self.assertEqual(result.exit_code, 0, result.output)
        with open(self.path('log1.json')) as fh:
            doc = json.load(fh)
        self.assertEqual(doc['meta']['name'], 'loghelix-case1')
        self.assertEqual(doc['s'][0], 0.5)

    def test_catalog_outside_validity(self):
        result = self.invoke('catalog', '--name', 'wcurve-case2', '--params', 'kappa=2,tau=1')
        self.assertEqual(result.exit_code, 1)

    def test_plot_is_deterministic(self):
        outputs = []
        for name in ('a.svg', 'b.svg'):
            result = self.invoke('plot', '--name', 'plane-case1', '--projection', 'x1x2',
                                 '--out', self.path(name))
            self.assertEqual(result.exit_code, 0, result.output)
            with open(self.path(name), 'rb') as fh:
                outputs.append(fh.read())
        self.assertEqual(outputs[0], outputs[1])
        self.assertEqual(outputs[0].count(b'<polyline'), 1)

    def test_plot_from_file(self):
        self.assertEqual(self.synth_w1().exit_code, 0)
        result = self.invoke('plot', '--input', self.path('w1.csv'), '--projection', 'x2x3')
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn('<polyline', result.output)

    def test_version(self):
        result = self.invoke('--version')
        self.assertEqual(result.exit_code, 0)
        self.assertIn('lorhelix', result.output)


if __name__ == '__main__':
    unittest.main()
