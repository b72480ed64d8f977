#!/usr/bin/env python3
"""
Unit tests for FileHandler and DOT export
"""

import json
import shutil
import subprocess
import tempfile
import unittest
from pathlib import Path

import pandas as pd

# Add src to path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.canon import atom, make_set, to_apg
from src.core.errors import CycleFound, GraphFormatError
from src.core.graph_core import RawGraph, validate
from src.core.harness import HarnessReport, SuiteResult
from src.utils.file_handler import FileHandler, export_dot

EMPTY = make_set(())
VN2 = make_set([EMPTY, make_set([EMPTY])])
VN2_TEXT = "apg 3 2\nedge 0 1\nedge 0 2\nedge 1 2\n"


class TestExportDot(unittest.TestCase):
    """Test cases for export_dot"""

    def test_empty_set(self):
        self.assertEqual(
            export_dot(to_apg(EMPTY)),
            'digraph apg {\n  rankdir=BT;\n  0 [label="0", shape=doublecircle];\n}\n',
        )

    def test_vn2(self):
        text = export_dot(to_apg(VN2))
        self.assertEqual(text.count(' -> '), 3)
        self.assertEqual(text.count('doublecircle'), 1)
        self.assertIn('  0 -> 1;\n', text)
        self.assertEqual(text, export_dot(to_apg(VN2)))

    def test_atom_label(self):
        self.assertIn('  0 [label="0\\n@a", shape=doublecircle];', export_dot(to_apg(atom('a'))))

    def test_label_quoting(self):
        apg = validate(RawGraph(2, [(0, 1)], {0: 'say"hi'}), 1)
        self.assertIn('[label="0\\n@say\\"hi", shape=circle]', export_dot(apg))


class TestFileHandler(unittest.TestCase):
    """Test cases for FileHandler"""

    def setUp(self):
        """Set up test fixtures"""
        self.temp_dir = tempfile.mkdtemp()
        self.handler = FileHandler()
        self.report = HarnessReport(0, 2, 10, [
            SuiteResult('Pairing', False, 4, 'pair({},{}) has 2 root members'),
            SuiteResult('Union', True, 12),
        ])

    def tearDown(self):
        """Clean up test fixtures"""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def path(self, name: str) -> Path:
        return Path(self.temp_dir) / name

    def test_load_graph(self):
        self.path('vn2.apg').write_text(VN2_TEXT, encoding='utf-8')
        apg = self.handler.load_graph(str(self.path('vn2.apg')))
        self.assertEqual(apg.node_count, 3)
        self.assertEqual(apg.root, 2)

    def test_load_graph_errors(self):
        self.path('bad.apg').write_text("apg 2\n", encoding='utf-8')
        with self.assertRaises(GraphFormatError) as caught:
            self.handler.load_graph(str(self.path('bad.apg')))
        self.assertEqual(caught.exception.line, 1)

        self.path('loop.apg').write_text("apg 2 1\nedge 0 1\nedge 0 0\n", encoding='utf-8')
        with self.assertRaises(CycleFound):
            self.handler.load_graph(str(self.path('loop.apg')))

    def test_save_graph_round_trip(self):
        target = self.path('out/vn2.apg')
        self.assertTrue(self.handler.save_graph(to_apg(VN2), str(target)))
        self.assertEqual(target.read_text(encoding='utf-8'), VN2_TEXT)
        self.assertEqual(self.handler.load_graph(str(target)), to_apg(VN2))

    def test_save_dot(self):
        target = self.path('vn2.dot')
        self.assertTrue(self.handler.save_dot(to_apg(VN2), str(target)))
        self.assertEqual(target.read_text(encoding='utf-8'), export_dot(to_apg(VN2)))

    def test_save_keeps_backup(self):
        target = self.path('note.txt')
        self.handler.save_text("first\n", str(target))
        self.handler.save_text("second\n", str(target))
        self.assertEqual(target.read_text(encoding='utf-8'), "second\n")
        self.assertEqual(self.path('note.backup.txt').read_text(encoding='utf-8'), "first\n")

    def test_export_report_text(self):
        target = self.path('report.txt')
        self.assertTrue(self.handler.export_report(self.report, str(target)))
        self.assertEqual(target.read_text(encoding='utf-8'), self.report.render())

    def test_export_report_csv(self):
        target = self.path('report.csv')
        self.assertTrue(self.handler.export_report(self.report, str(target)))
        frame = pd.read_csv(target, keep_default_na=False)
        self.assertEqual(list(frame.columns), ['suite', 'status', 'checked', 'detail'])
        self.assertEqual(list(frame['status']), ['FAIL', 'PASS'])
        self.assertEqual(frame['detail'][0], 'pair({},{}) has 2 root members')

    def test_export_report_json(self):
        target = self.path('report.json')
        self.assertTrue(self.handler.export_report(self.report, str(target)))
        rows = json.loads(target.read_text(encoding='utf-8'))
        self.assertEqual(rows[1], {'suite': 'Union', 'status': 'PASS', 'checked': 12, 'detail': ''})

    def test_export_dataframe_as_text(self):
        target = self.path('frame.out')
        self.assertTrue(self.handler.export_report(self.report.to_dataframe(), str(target), fmt='text'))
        self.assertEqual(target.read_text(encoding='utf-8'), self.report.render())

    def test_unsupported_format(self):
        self.assertFalse(self.handler.export_report(self.report, str(self.path('r.txt')), fmt='xml'))


class TestImportOrder(unittest.TestCase):
    """Each module imports cleanly in a fresh interpreter"""

    MODULES = ['src.core.graph_core', 'src.utils.logger', 'src.utils.file_handler', 'src.utils']

    def test_fresh_imports(self):
        root = Path(__file__).parent.parent
        for module in self.MODULES:
            with self.subTest(module=module):
                result = subprocess.run(
                    [sys.executable, '-c', f'import {module}'],
                    cwd=str(root), capture_output=True, text=True,
                )
                self.assertEqual(result.returncode, 0, result.stderr)


if __name__ == '__main__':
    unittest.main()
