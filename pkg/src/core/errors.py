"""
Exception hierarchy for apg-sets

Every failure a caller can act on is a subclass of ApgSetError and carries
its payload (witness path, offending node, parse position ...) as attributes.
"""

from typing import Any, List, Optional, Sequence


class ApgSetError(Exception):
    """Base class for all library errors"""


# Graph layer

class GraphFormatError(ApgSetError):
    """Malformed raw graph or graph text"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class RootOutOfRange(ApgSetError):
    def __init__(self, root: int, node_count: int):
        self.root = root
        self.node_count = node_count
        super().__init__(f"root {root} is outside 0..{node_count - 1}")


class CycleFound(ApgSetError):
    """The child relation has a directed cycle; `path` lists it child-first"""

    def __init__(self, path: Sequence[int]):
        self.path = list(path)
        super().__init__("cycle: " + " < ".join(str(n) for n in self.path))


class Inaccessible(ApgSetError):
    def __init__(self, nodes: Sequence[int]):
        self.nodes = sorted(nodes)
        super().__init__(f"nodes without a path to the root: {self.nodes}")


class LabeledNonLeaf(ApgSetError):
    def __init__(self, node: int):
        self.node = node
        super().__init__(f"atom-labeled node {node} has children")


class EmptySubset(ApgSetError):
    def __init__(self):
        super().__init__("minimal element requested for an empty subset")


class UnfoldTooLarge(ApgSetError):
    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"tree unfolding exceeds {limit} nodes")


class DepthLimitExceeded(ApgSetError):
    def __init__(self, depth_limit: int, height: int):
        self.depth_limit = depth_limit
        self.height = height
        super().__init__(f"depth limit {depth_limit} is below the graph height {height}")


# Bisimulation layer

class NotExtensional(ApgSetError):
    def __init__(self, side: str):
        self.side = side
        super().__init__(f"{side} graph is not extensional")


# Canonical sets

class AtomNotEncodable(ApgSetError):
    def __init__(self, value: Any):
        self.value = value
        super().__init__(f"Ackermann coding is defined on pure sets only: {value}")


class NegativeCode(ApgSetError):
    def __init__(self, code: int):
        self.code = code
        super().__init__(f"Ackermann codes are naturals, got {code}")


# Set constructions

class AtomArgument(ApgSetError):
    def __init__(self, operation: str, value: Any):
        self.operation = operation
        self.value = value
        super().__init__(f"{operation} expects a set, got atom {value}")


class PartialFunction(ApgSetError):
    def __init__(self, missing: Any):
        self.missing = missing
        super().__init__(f"function is undefined on member {missing}")


class EmptyMemberFound(ApgSetError):
    def __init__(self, member: Any):
        self.member = member
        super().__init__(f"cannot choose from the empty member {member}")


class AtomMemberFound(ApgSetError):
    def __init__(self, member: Any):
        self.member = member
        super().__init__(f"cannot choose from the atom member {member}")


class PathDisagreement(ApgSetError):
    """Surgery and direct constructions produced different sets"""

    def __init__(self, operation: str, surgery: Any, direct: Any):
        self.operation = operation
        self.surgery = surgery
        self.direct = direct
        super().__init__(f"{operation}: surgery gave {surgery}, direct gave {direct}")


# Formulas

class UnboundVariable(ApgSetError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"variable '{name}' has no value")


class AtomBoundInQuantifier(ApgSetError):
    def __init__(self, name: str, value: Any):
        self.name = name
        self.value = value
        super().__init__(f"quantifier bound '{name}' is the atom {value}")


class RankTooLarge(ApgSetError):
    def __init__(self, rank: int, maximum: int):
        self.rank = rank
        self.maximum = maximum
        super().__init__(f"rank {rank} exceeds the configured maximum {maximum}")


class FormulaSyntaxError(ApgSetError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


class ScopeError(ApgSetError):
    def __init__(self, variable: str):
        self.variable = variable
        super().__init__(f"variable '{variable}' is neither bound nor declared free")


# Finite category

class DomainMismatch(ApgSetError):
    def __init__(self, expected: Any, actual: Any):
        self.expected = expected
        self.actual = actual
        super().__init__(f"codomain {expected} does not match domain {actual}")


class NotEquivalenceRelation(ApgSetError):
    def __init__(self, law: str, witness: List[Any]):
        self.law = law
        self.witness = witness
        super().__init__(f"relation is not {law}: {witness}")


# Expression front end

class ExprSyntaxError(ApgSetError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


class ExprTypeError(ApgSetError):
    """An operation received a natural where a set was expected, or vice versa"""


# Configuration

class ConfigError(ApgSetError):
    """The configuration does not match the schema; `problems` lists each violation"""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("invalid configuration: " + "; ".join(self.problems))
