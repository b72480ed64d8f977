#!/usr/bin/env python3
"""
apg-sets
========

Command-line interface for hereditarily finite sets built as well-founded
extensional accessible pointed graphs: evaluate set expressions, compare and
export graphs, and run the axiom harness.

Results (braces renderings, naturals, DOT text, graph files, reports) go to
stdout exactly; messages and errors go to stderr.
"""

import functools
import logging
import sys
from pathlib import Path
from typing import Iterator, Optional, Union

import click
import yaml
from rich.console import Console
from rich.panel import Panel

from src.core.bisim import ext_quotient, iso, unfold_to_tree
from src.core.canon import HfSet, ack_decode, ack_encode, canonicalize, render, to_apg
from src.core.config_manager import ConfigManager
from src.core.errors import (
    ApgSetError,
    AtomArgument,
    ConfigError,
    ExprSyntaxError,
    ExprTypeError,
    FormulaSyntaxError,
    GraphFormatError,
)
from src.core.expr import ExprEvaluator, parse_expr
from src.core.graph_core import WfApg, format_graph_text
from src.core.harness import HarnessReport, run_harness
from src.core.logic import enumerate_rank
from src.core.setops import SetConstructor
from src.utils.file_handler import FileHandler, export_dot
from src.utils.logger import add_file_handler, set_package_level, setup_logger

__version__ = "1.0.0"

# stdout is reserved for results
console = Console(stderr=True)

USAGE_ERRORS = (ExprSyntaxError, FormulaSyntaxError, GraphFormatError, ConfigError)


class SetProcessor:
    """Facade over expression evaluation, graph files and the harness"""

    def __init__(self, config_path: Optional[str] = None, method: Optional[str] = None):
        """
        Args:
            config_path: Optional JSON/YAML configuration file
            method: Construction path; overrides construction.method
        """
        self.logger = setup_logger(__name__)
        self.config = ConfigManager(config_path)
        if method:
            self.config.set('construction.method', method)
        self.validate_config()

        self.output = self.config.get_output_config()
        self.constructor = SetConstructor(self.config.get('construction.method', 'both'))
        self.evaluator = ExprEvaluator(self.constructor, self.config.get('logic.max_rank', 5))
        self.file_handler = FileHandler(self.output['encoding'])

    def validate_config(self):
        """
        Raises:
            ConfigError: the current settings break the schema
        """
        result = self.config.validate_config()
        for warning in result['warnings']:
            self.logger.warning(warning)
        if not result['valid']:
            raise ConfigError(result['errors'])

    # Expressions

    def evaluate(self, text: str) -> Union[HfSet, int]:
        return self.evaluator.evaluate(parse_expr(text))

    def evaluate_set(self, text: str) -> HfSet:
        value = self.evaluate(text)
        if not isinstance(value, HfSet):
            raise ExprTypeError(f"expected a set, got the natural {value}")
        return value

    def are_isomorphic(self, left: WfApg, right: WfApg) -> bool:
        return iso(left, right) is not None

    def is_member(self, element: str, container: str) -> bool:
        return self.evaluate_set(element) in self.evaluate_set(container)

    def cardinality(self, text: str) -> int:
        value = self.evaluate_set(text)
        if value.is_atom:
            raise AtomArgument('card', render(value))
        return len(value)

    def ackermann_code(self, text: str) -> int:
        return ack_encode(self.evaluate_set(text))

    def enumerate(self, k: int) -> Iterator[HfSet]:
        return iter(enumerate_rank(k, self.config.get('logic.max_rank', 5)))

    # Graphs

    def load_apg(self, source: str, is_expression: bool = False) -> WfApg:
        if is_expression:
            return to_apg(self.evaluate_set(source))
        return self.file_handler.load_graph(source)

    def quotient(self, apg: WfApg) -> WfApg:
        quotient, _ = ext_quotient(apg, self.config.get('bisim.algorithm', 'refine'))
        self.logger.info(f"Quotient has {quotient.node_count} of {apg.node_count} nodes")
        return quotient

    def unfold(self, apg: WfApg, depth_limit: Optional[int] = None) -> WfApg:
        return unfold_to_tree(apg, depth_limit, self.config.get('unfold.max_nodes', 200000))

    # Harness

    def check(self, report_path: Optional[str] = None, **overrides) -> HarnessReport:
        """
        Run the axiom harness with configuration values, optionally overridden

        Args:
            report_path: Also export the report table here (text/csv/json by suffix)
            **overrides: dotted configuration keys, e.g. {'harness.rank': 3}
        """
        self.config.update_settings(overrides)
        self.validate_config()
        settings = self.config.get_harness_config()
        self.logger.info(f"Running harness: {settings}")
        report = run_harness(**settings)

        if report_path:
            fmt = None if Path(report_path).suffix else self.output['report_format']
            if not self.file_handler.export_report(report, report_path, fmt):
                console.print(f"❌ Failed to write report: {report_path}", style="red")
        return report


def _report_errors(command):
    """Map library errors to messages on stderr and exit codes 2 (usage) or 1"""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except USAGE_ERRORS as e:
            console.print(f"❌ {type(e).__name__}: {e}", style="red", markup=False)
            sys.exit(2)
        except (ApgSetError, ValueError, OSError) as e:
            console.print(f"❌ {type(e).__name__}: {e}", style="red", markup=False)
            sys.exit(1)
    return wrapper


def _echo_value(value: Union[HfSet, int]):
    click.echo(render(value) if isinstance(value, HfSet) else str(value))


def _echo_bool(value: bool):
    click.echo('true' if value else 'false')


@click.group()
@click.version_option(__version__, prog_name='apg-sets')
@click.option('--config', '-c', type=click.Path(dir_okay=False), help='Configuration file path')
@click.option('--surgery', 'method', flag_value='surgery', help='Build sets by graph surgery only')
@click.option('--direct', 'method', flag_value='direct', help='Build sets directly only')
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose logging')
@click.option('--log-file', type=click.Path(dir_okay=False), help='Also write log messages here')
@click.pass_context
def main(ctx, config, method, verbose, log_file):
    """
    Hereditarily finite sets as well-founded extensional pointed graphs

    By default every construction runs on both the surgery and the direct
    path and the results are compared.
    """
    try:
        processor = SetProcessor(config, method)
    except ConfigError as e:
        console.print(f"❌ {e}", style="red", markup=False)
        sys.exit(2)
    except Exception as e:
        console.print(f"❌ Failed to initialize: {str(e)}", style="red", markup=False)
        sys.exit(1)

    if verbose or processor.config.get('advanced.verbose_logging', False):
        set_package_level(logging.DEBUG)
    if log_file:
        add_file_handler(logging.getLogger('src'), log_file)

    ctx.obj = processor


@main.command('eval')
@click.argument('expression')
@click.pass_obj
@_report_errors
def eval_command(processor: SetProcessor, expression):
    """Evaluate EXPRESSION and print its canonical value"""
    _echo_value(processor.evaluate(expression))


@main.command('iso')
@click.argument('left')
@click.argument('right')
@click.option('--files', is_flag=True, help='LEFT and RIGHT are graph files')
@click.pass_obj
@_report_errors
def iso_command(processor: SetProcessor, left, right, files):
    """Decide whether two extensional APGs are isomorphic"""
    left_apg = processor.load_apg(left, is_expression=not files)
    right_apg = processor.load_apg(right, is_expression=not files)
    _echo_bool(processor.are_isomorphic(left_apg, right_apg))


@main.command('member')
@click.argument('element')
@click.argument('container')
@click.pass_obj
@_report_errors
def member_command(processor: SetProcessor, element, container):
    """Decide ELEMENT ∈ CONTAINER"""
    _echo_bool(processor.is_member(element, container))


@main.command('card')
@click.argument('expression')
@click.pass_obj
@_report_errors
def card_command(processor: SetProcessor, expression):
    """Number of members of a set"""
    click.echo(str(processor.cardinality(expression)))


@main.command('ack')
@click.argument('expression')
@click.pass_obj
@_report_errors
def ack_command(processor: SetProcessor, expression):
    """Ackermann code of a pure set"""
    click.echo(str(processor.ackermann_code(expression)))


@main.command('unack')
@click.argument('code', type=int)
@_report_errors
def unack_command(code):
    """The pure set with Ackermann code CODE"""
    click.echo(render(ack_decode(code)))


@main.command('dot')
@click.argument('source')
@click.option('--expr', '-e', 'is_expression', is_flag=True,
              help='SOURCE is a set expression rather than a graph file')
@click.option('--output', '-o', type=click.Path(dir_okay=False), help='Write DOT here')
@click.pass_obj
@_report_errors
def dot_command(processor: SetProcessor, source, is_expression, output):
    """Export a graph file (or an expression's APG) as graphviz DOT"""
    apg = processor.load_apg(source, is_expression)
    if output:
        if not processor.file_handler.save_dot(apg, output):
            sys.exit(1)
        console.print(f"✅ DOT saved: {output}")
    else:
        click.echo(export_dot(apg), nl=False)


@main.command('enumerate')
@click.argument('k', type=int)
@click.pass_obj
@_report_errors
def enumerate_command(processor: SetProcessor, k):
    """List every pure set of rank below K, in canonical order"""
    for value in processor.enumerate(k):
        click.echo(render(value))


@main.command('render')
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
@_report_errors
def render_command(processor: SetProcessor, file):
    """Canonical set denoted by a graph file"""
    click.echo(render(canonicalize(processor.load_apg(file))))


@main.command('quotient')
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@click.option('--output', '-o', type=click.Path(dir_okay=False), help='Write the graph here')
@click.pass_obj
@_report_errors
def quotient_command(processor: SetProcessor, file, output):
    """Extensional quotient of a graph file"""
    apg = processor.load_apg(file)
    quotient = processor.quotient(apg)
    if output:
        if not processor.file_handler.save_graph(quotient, output):
            sys.exit(1)
        console.print(f"✅ Quotient saved: {output} ({quotient.node_count} of {apg.node_count} nodes)")
    else:
        click.echo(format_graph_text(quotient), nl=False)


@main.command('unfold')
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@click.option('--depth', type=int, help='Depth limit; fails if the graph is deeper')
@click.option('--output', '-o', type=click.Path(dir_okay=False), help='Write the tree here')
@click.pass_obj
@_report_errors
def unfold_command(processor: SetProcessor, file, depth, output):
    """Tree unfolding of a graph file"""
    apg = processor.load_apg(file)
    tree = processor.unfold(apg, depth)
    if output:
        if not processor.file_handler.save_graph(tree, output):
            sys.exit(1)
        console.print(f"✅ Tree saved: {output} ({tree.node_count} nodes)")
    else:
        click.echo(format_graph_text(tree), nl=False)


@main.command('check')
@click.option('--rank', type=int, help='Exhaustive universe enumerate_rank(RANK)')
@click.option('--seed', type=int, help='Root seed')
@click.option('--samples', type=int, help='Random inputs per suite')
@click.option('--report', 'report_path', type=click.Path(dir_okay=False),
              help='Export the report table (.txt, .csv or .json)')
@click.option('--parallel/--serial', default=None, help='Run suites in parallel threads')
@click.pass_obj
@_report_errors
def check_command(processor: SetProcessor, rank, seed, samples, report_path, parallel):
    """Run the axiom harness; exits 1 if any suite fails"""
    report = processor.check(report_path, **{
        'harness.rank': rank,
        'harness.seed': seed,
        'harness.samples': samples,
        'advanced.parallel_processing': parallel,
    })
    click.echo(report.render(), nl=False)

    failed = [r.suite for r in report.results if not r.passed]
    summary = f"{len(report.results) - len(failed)}/{len(report.results)} suites passed"
    console.print(Panel(summary, title="Axiom harness",
                        border_style="red" if failed else "green"))
    sys.exit(report.exit_code)


@main.group('config')
def config_group():
    """Show or save the effective configuration"""


@config_group.command('show')
@click.pass_obj
def config_show(processor: SetProcessor):
    """Print the effective settings as YAML"""
    click.echo(yaml.safe_dump(processor.config.get_all_settings(), default_flow_style=False), nl=False)


@config_group.command('save')
@click.argument('path', type=click.Path(dir_okay=False))
@click.option('--defaults', is_flag=True, help='Save the built-in defaults instead')
@click.pass_obj
def config_save(processor: SetProcessor, path, defaults):
    """Write the settings to PATH (.json, .yaml or .yml)"""
    if defaults:
        processor.config.reset_to_defaults()
    if not processor.config.save_config(path):
        sys.exit(1)
    console.print(f"✅ Configuration saved: {path}")


if __name__ == '__main__':
    main()
