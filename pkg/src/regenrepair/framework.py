"""Shared machinery for centralized repair of several failed nodes at once.

The repair center runs the single-failure decoder of every lost node. Each
decoder wants one transfer from every other node it would normally hear
from, including the nodes that failed alongside it. Every such missing
transfer can be expressed as a linear combination of the other transfers,
which yields a square linear system A s = b in the e(e-1)*beta unknown
cross-failure values. When A is invertible the unknowns are recovered and
the ordinary decoders finish the job; a singular A means the pattern is
not repairable with the chosen code coefficients, which is a reportable
outcome rather than a bug.
"""

from dataclasses import dataclass, field as dataclass_field

from .gf import Matrix, SingularMatrixError, mat_det, mat_solve


class SingularCouplingError(ValueError):
    """Coupling matrix is singular: the failure pattern is unrecoverable."""

    def __init__(self, failed):
        self.failed = tuple(sorted(failed))
        super().__init__("singular coupling system for failed nodes %s" % (self.failed,))


class InvalidHelperCountError(ValueError):
    """Helper set size is incompatible with the requested repair degree."""


@dataclass(frozen=True)
class RepairProblem:
    """One centralized repair instance: who failed, who helps, transfer size."""

    failed: tuple
    helpers: tuple
    beta: int = 1

    def __post_init__(self):
        object.__setattr__(self, "failed", tuple(sorted(self.failed)))
        object.__setattr__(self, "helpers", tuple(sorted(self.helpers)))
        if not self.failed:
            raise ValueError("need at least one failed node")
        if not self.helpers:
            raise ValueError("need at least one helper")
        if len(set(self.failed)) != len(self.failed):
            raise ValueError("duplicate failed nodes")
        if len(set(self.helpers)) != len(self.helpers):
            raise ValueError("duplicate helpers")
        if set(self.failed) & set(self.helpers):
            raise ValueError("failed nodes cannot also be helpers")
        if self.beta < 1:
            raise ValueError("beta must be positive")

    @property
    def e(self):
        return len(self.failed)


def unknown_pairs(failed):
    """Canonical order of the cross-failure transfers (source, destination).

    Pairs are grouped by unordered pair, lower-indexed source first:
    (f1,f2),(f2,f1),(f1,f3),(f3,f1),...,(f_{e-1},f_e),(f_e,f_{e-1}).
    """
    nodes = sorted(failed)
    pairs = []
    for a in range(len(nodes)):
        for b in range(a + 1, len(nodes)):
            pairs.append((nodes[a], nodes[b]))
            pairs.append((nodes[b], nodes[a]))
    return pairs


def unknown_index(failed, i, j):
    """Position of the transfer i -> j inside the unknown vector."""
    nodes = sorted(failed)
    if i == j:
        raise ValueError("no self transfer")
    p = nodes.index(min(i, j))
    q = nodes.index(max(i, j))
    e = len(nodes)
    block = p * (e - 1) - p * (p - 1) // 2 + (q - p - 1)
    return 2 * block + (0 if i < j else 1)


class CouplingSystem:
    """The linear system A s = b in the unavailable cross-failure transfers.

    Rows and columns are indexed by ordered failed-node pairs in the
    unknown_pairs order; each pair spans beta consecutive slots. The
    diagonal is pre-filled with -1 (equal to 1 in characteristic 2): row
    (i,j) encodes s_{i,j} = sum of coupled terms, moved to one side.
    """

    def __init__(self, field, failed, beta=1):
        self.field = field
        self.failed = tuple(sorted(failed))
        self.beta = beta
        self.pairs = unknown_pairs(self.failed)
        self.size = len(self.pairs) * beta
        self.A = Matrix.zero(field, self.size, self.size)
        self.b = [0] * self.size
        minus_one = field.neg(1)
        for t in range(self.size):
            self.A.data[t][t] = minus_one

    def index(self, i, j, t=0):
        return unknown_index(self.failed, i, j) * self.beta + t

    def set_entry(self, row_pair, col_pair, value, t=0, u=0):
        r = self.index(row_pair[0], row_pair[1], t)
        c = self.index(col_pair[0], col_pair[1], u)
        self.A.data[r][c] = value

    def add_entry(self, row_pair, col_pair, value, t=0, u=0):
        r = self.index(row_pair[0], row_pair[1], t)
        c = self.index(col_pair[0], col_pair[1], u)
        self.A.data[r][c] = self.field.add(self.A.data[r][c], value)

    def add_rhs(self, row_pair, value, t=0):
        r = self.index(row_pair[0], row_pair[1], t)
        self.b[r] = self.field.add(self.b[r], value)

    def determinant(self):
        return mat_det(self.A)

    def solve(self):
        """Solve for the unknown transfers, keyed by (source, destination).

        Values are scalars when beta is 1, lists of beta symbols otherwise.
        """
        if self.size == 0:
            return {}
        try:
            x = mat_solve(self.A, self.b)
        except SingularMatrixError:
            raise SingularCouplingError(self.failed) from None
        out = {}
        for idx, pair in enumerate(self.pairs):
            vals = x[idx * self.beta : (idx + 1) * self.beta]
            out[pair] = vals[0] if self.beta == 1 else vals
        return out


@dataclass
class RepairTranscript:
    """Bandwidth accounting for one repair: symbols sent per helper."""

    per_helper: dict
    total: int = 0
    success: bool = True
    notes: dict = dataclass_field(default_factory=dict)

    def __post_init__(self):
        if not self.total:
            self.total = sum(self.per_helper.values())


def solve_and_regenerate(system, decode, problem):
    """Solve the coupling system, then decode every failed node.

    decode(failed_node, solved) must return the regenerated content given
    the solved cross-failure transfers; the family closure carries the
    transfers actually received from helpers. With a single failure the
    system is empty (0 x 0) and decoding runs directly.
    """
    solved = system.solve() if system is not None else {}
    contents = {f: decode(f, solved) for f in problem.failed}
    per_helper = {h: problem.e * problem.beta for h in problem.helpers}
    return contents, RepairTranscript(per_helper)
