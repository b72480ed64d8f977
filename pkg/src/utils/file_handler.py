"""
File handling utilities for apg-sets

Graph files, DOT export and harness report export.
"""

import shutil
from pathlib import Path
from typing import Optional

import pandas as pd

from src.core.graph_core import WfApg, format_graph_text, parse_graph_text, validate
from src.utils.logger import setup_logger

REPORT_FORMATS = {'.txt': 'text', '.text': 'text', '.csv': 'csv', '.json': 'json'}


def _dot_escape(text: str) -> str:
    return text.replace('\\', '\\\\').replace('"', '\\"')


def export_dot(apg: WfApg) -> str:
    """
    Render an APG as a graphviz digraph

    Node ids are the node indices, the root is drawn as a double circle and
    edges run child -> parent. Equal inputs give byte-identical output.
    """
    lines = ["digraph apg {", "  rankdir=BT;"]
    for node in range(apg.node_count):
        label = str(node)
        if apg.label(node) is not None:
            # graphviz line break, then the atom name
            label += "\\n@" + _dot_escape(apg.label(node))
        shape = 'doublecircle' if node == apg.root else 'circle'
        lines.append(f'  {node} [label="{label}", shape={shape}];')
    for child, parent in apg.graph.edges:
        lines.append(f"  {child} -> {parent};")
    lines.append("}")
    return "\n".join(lines) + "\n"


class FileHandler:
    """Reads and writes graph files, DOT text and reports"""

    def __init__(self, encoding: str = 'utf-8'):
        """
        Initialize file handler

        Args:
            encoding: Text encoding for every file written
        """
        self.logger = setup_logger(__name__)
        self.encoding = encoding

    def load_graph(self, file_path: str) -> WfApg:
        """
        Read and validate a graph file

        Raises:
            GraphFormatError: malformed text
            ApgSetError: the graph is not a well-founded accessible pointed graph
        """
        file_path = Path(file_path)
        text = file_path.read_text(encoding=self.encoding)
        raw, root = parse_graph_text(text)
        apg = validate(raw, root)
        self.logger.info(f"Loaded graph with {apg.node_count} nodes from {file_path}")
        return apg

    def save_graph(self, apg: WfApg, output_path: str) -> bool:
        """Write an APG in the line-based graph format"""
        return self.save_text(format_graph_text(apg), output_path)

    def save_dot(self, apg: WfApg, output_path: str) -> bool:
        return self.save_text(export_dot(apg), output_path)

    def save_text(self, text: str, output_path: str) -> bool:
        """
        Save text to file, keeping a backup of any file it replaces

        Returns:
            Success status
        """
        try:
            output_path = Path(output_path)
            output_path.parent.mkdir(parents=True, exist_ok=True)

            if output_path.exists():
                self.backup_file(str(output_path))

            with open(output_path, 'w', encoding=self.encoding, newline='') as f:
                f.write(text)

            self.logger.info(f"Saved: {output_path}")
            return True

        except Exception as e:
            self.logger.error(f"Failed to save {output_path}: {str(e)}")
            return False

    def export_report(self, report, output_path: str, fmt: Optional[str] = None) -> bool:
        """
        Export a harness report

        Args:
            report: HarnessReport or a DataFrame with suite/status/checked/detail
            output_path: Target file
            fmt: 'text', 'csv' or 'json'; taken from the suffix when omitted

        Returns:
            Success status
        """
        try:
            output_path = Path(output_path)
            fmt = fmt or REPORT_FORMATS.get(output_path.suffix.lower(), 'text')
            df = report if isinstance(report, pd.DataFrame) else report.to_dataframe()

            if fmt == 'csv':
                text = df.to_csv(index=False)
            elif fmt == 'json':
                text = df.to_json(orient='records', indent=2) + "\n"
            elif fmt == 'text':
                text = self._render_report_text(report, df)
            else:
                self.logger.error(f"Unsupported report format: {fmt}")
                return False

            return self.save_text(text, str(output_path))

        except Exception as e:
            self.logger.error(f"Report export failed: {str(e)}")
            return False

    def _render_report_text(self, report, df: pd.DataFrame) -> str:
        if hasattr(report, 'render'):
            return report.render()
        lines = []
        for row in df.itertuples(index=False):
            line = f"{row.status} {row.suite} ({row.checked} checks)"
            if row.detail:
                line += f" {row.detail}"
            lines.append(line)
        return "\n".join(lines) + "\n"

    def backup_file(self, file_path: str) -> Optional[str]:
        """
        Copy file_path to <stem>.backup<suffix> beside it

        Returns:
            Backup file path if successful, None otherwise
        """
        try:
            file_path = Path(file_path)

            if not file_path.exists():
                return None

            backup_path = file_path.with_suffix(f".backup{file_path.suffix}")

            shutil.copy2(file_path, backup_path)

            self.logger.debug(f"Created backup: {backup_path}")
            return str(backup_path)

        except Exception as e:
            self.logger.error(f"Failed to create backup: {str(e)}")
            return None
