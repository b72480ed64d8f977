#!/usr/bin/env python3
"""
Unit tests for ConfigManager
"""

import json
import shutil
import tempfile
import unittest
from pathlib import Path

import yaml

# Add src to path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.config_manager import ConfigManager


class TestConfigManager(unittest.TestCase):
    """Test cases for ConfigManager"""

    def setUp(self):
        """Set up test fixtures"""
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        """Clean up test fixtures"""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_defaults(self):
        config = ConfigManager()
        self.assertEqual(config.get('harness.rank'), 4)
        self.assertEqual(config.get('harness.samples'), 500)
        self.assertEqual(config.get('construction.method'), 'both')
        self.assertEqual(config.get('bisim.algorithm'), 'refine')
        self.assertEqual(config.get('missing.key', 'fallback'), 'fallback')
        self.assertTrue(config.validate_config()['valid'])

    def test_shipped_config_matches_defaults(self):
        shipped = Path(__file__).parent.parent / 'config.json'
        config = ConfigManager(str(shipped))
        self.assertEqual(config.get_all_settings(), config.default_config)

    def test_load_json_merges_over_defaults(self):
        path = Path(self.temp_dir) / 'settings.json'
        path.write_text(json.dumps({'harness': {'rank': 2}}), encoding='utf-8')
        config = ConfigManager()
        self.assertTrue(config.load_config(str(path)))
        self.assertEqual(config.get('harness.rank'), 2)
        self.assertEqual(config.get('harness.samples'), 500)

    def test_load_yaml(self):
        path = Path(self.temp_dir) / 'settings.yaml'
        path.write_text("construction:\n  method: surgery\nlogic:\n  max_rank: 3\n", encoding='utf-8')
        config = ConfigManager(str(path))
        self.assertEqual(config.get('construction.method'), 'surgery')
        self.assertEqual(config.get('logic.max_rank'), 3)

    def test_missing_or_unsupported_file_falls_back(self):
        config = ConfigManager()
        self.assertFalse(config.load_config(str(Path(self.temp_dir) / 'absent.json')))
        self.assertEqual(config.get('harness.rank'), 4)

        path = Path(self.temp_dir) / 'settings.ini'
        path.write_text("[harness]\nrank = 1\n", encoding='utf-8')
        self.assertFalse(config.load_config(str(path)))
        self.assertEqual(config.get('harness.rank'), 4)

    def test_malformed_json_falls_back(self):
        path = Path(self.temp_dir) / 'broken.json'
        path.write_text("{not json", encoding='utf-8')
        config = ConfigManager()
        self.assertFalse(config.load_config(str(path)))
        self.assertEqual(config.get_all_settings(), config.default_config)

    def test_set_and_get(self):
        config = ConfigManager()
        self.assertTrue(config.set('harness.seed', 42))
        self.assertTrue(config.set('extra.nested.value', 'x'))
        self.assertEqual(config.get('harness.seed'), 42)
        self.assertEqual(config.get('extra.nested.value'), 'x')

    def test_defaults_are_not_shared(self):
        config = ConfigManager()
        config.set('harness.rank', 1)
        self.assertEqual(config.default_config['harness']['rank'], 4)
        config.reset_to_defaults()
        self.assertEqual(config.get('harness.rank'), 4)

    def test_update_settings_skips_none(self):
        config = ConfigManager()
        config.update_settings({'harness.rank': 3, 'harness.seed': None})
        self.assertEqual(config.get('harness.rank'), 3)
        self.assertEqual(config.get('harness.seed'), 0)

    def test_harness_config(self):
        config = ConfigManager()
        config.update_settings({'harness.samples': 20, 'advanced.parallel_processing': True})
        kwargs = config.get_harness_config()
        self.assertEqual(kwargs['samples'], 20)
        self.assertTrue(kwargs['parallel'])
        self.assertEqual(set(kwargs), {'seed', 'rank', 'samples', 'dag_count', 'dag_max_nodes',
                                       'max_rank', 'parallel', 'max_workers'})

    def test_output_config(self):
        self.assertEqual(ConfigManager().get_output_config(),
                         {'encoding': 'utf-8', 'report_format': 'text'})

    def test_validation_errors(self):
        config = ConfigManager()
        config.set('harness.rank', 9)
        config.set('construction.method', 'fastest')
        config.set('output.encoding', 'no-such-codec')
        result = config.validate_config()
        self.assertFalse(result['valid'])
        self.assertEqual(len(result['errors']), 3)
        self.assertTrue(any(e.startswith('construction:') for e in result['errors']))
        self.assertIn('Invalid encoding: no-such-codec', result['errors'])

    def test_validation_warnings(self):
        config = ConfigManager()
        config.set('logic.max_rank', 3)
        config.set('plugins', {})
        result = config.validate_config()
        self.assertTrue(result['valid'])
        self.assertEqual(len(result['warnings']), 2)

    def test_save_round_trip(self):
        config = ConfigManager()
        config.set('harness.seed', 7)
        for name in ['saved.json', 'saved.yaml']:
            with self.subTest(name=name):
                path = Path(self.temp_dir) / 'out' / name
                self.assertTrue(config.save_config(str(path)))
                self.assertEqual(ConfigManager(str(path)).get('harness.seed'), 7)

        loaded = yaml.safe_load((Path(self.temp_dir) / 'out' / 'saved.yaml').read_text(encoding='utf-8'))
        self.assertEqual(loaded['harness']['seed'], 7)


if __name__ == '__main__':
    unittest.main()
