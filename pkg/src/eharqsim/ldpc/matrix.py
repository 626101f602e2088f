"""Parity-check matrices and their subcodes.

This module provides:
- ParityCheckMatrix: an immutable sparse binary check/variable graph.
- SubcodeView: the code induced by a subset of the checks.
- extract_subcode: build a SubcodeView by prefix or explicit rows.
- regular_code: a seeded regular Gallager code.
"""

import math
from functools import cached_property

import numpy as np

from eharqsim.utils.model import FixedValue, PositiveNumber
from eharqsim.utils.rng import Purpose, substream


class ParityCheckMatrix:
    """Hold the Tanner graph of a binary parity-check matrix.

    Edges are stored sorted by check index then by variable index, so
    per-check reductions can use contiguous segments.
    """

    n_checks = PositiveNumber(int, strict=True)
    n_vars = PositiveNumber(int, strict=True)
    check_to_vars = FixedValue()
    var_to_checks = FixedValue()

    def __init__(self, check_to_vars, n_vars=None):
        """Initialise the matrix from its rows.

        Parameters
        ----------
        check_to_vars : sequence of sequences of int
            for each check, the 0-indexed variables it involves
        n_vars : int, optional
            the number of variables. Default to None, and set to one
            plus the largest variable index.

        """
        rows = [np.asarray(row, dtype=np.int64) for row in check_to_vars]
        if not rows:
            msg = "A parity-check matrix needs at least one check."
            raise ValueError(msg)

        if n_vars is None:
            n_vars = 1 + max((int(r.max()) for r in rows if r.size), default=0)

        self.n_checks = len(rows)
        self.n_vars = n_vars

        cols = [[] for _ in range(self.n_vars)]
        sorted_rows = []
        for m, row in enumerate(rows):
            if row.size == 0:
                msg = f"The check {m} has no variable."
                raise ValueError(msg)

            if row.min() < 0 or row.max() >= self.n_vars:
                msg = (
                    f"The check {m} refers to a variable outside "
                    f"[0, {self.n_vars})."
                )
                raise ValueError(msg)

            uniq = np.unique(row)
            if uniq.size != row.size:
                msg = f"The check {m} has duplicate edges."
                raise ValueError(msg)

            sorted_rows.append(tuple(int(k) for k in uniq))
            for k in uniq:
                cols[int(k)].append(m)

        empty = [k for k, col in enumerate(cols) if not col]
        if empty:
            msg = (
                f"{len(empty)} variable(s) have no check, the first is "
                f"{empty[0]}."
            )
            raise ValueError(msg)

        self.check_to_vars = tuple(sorted_rows)
        self.var_to_checks = tuple(tuple(col) for col in cols)

    @classmethod
    def from_dense(cls, dense):
        """Create the matrix from a dense 0/1 array of shape (m, n)."""
        dense = np.asarray(dense)
        if dense.ndim != 2:
            msg = "The dense parity-check matrix must be two-dimensional."
            raise ValueError(msg)

        rows = [np.flatnonzero(row) for row in dense]
        return cls(rows, n_vars=dense.shape[1])

    @cached_property
    def edge_checks(self):
        """Return the check index of every edge."""
        return np.repeat(
            np.arange(self.n_checks), [len(r) for r in self.check_to_vars]
        )

    @cached_property
    def edge_vars(self):
        """Return the variable index of every edge."""
        return np.concatenate(
            [np.asarray(r, dtype=np.int64) for r in self.check_to_vars]
        )

    @cached_property
    def check_starts(self):
        """Return the first edge of every check."""
        degrees = [len(r) for r in self.check_to_vars]
        return np.concatenate(([0], np.cumsum(degrees)[:-1])).astype(np.int64)

    @property
    def n_edges(self):
        """Return the number of edges."""
        return int(self.edge_vars.size)

    def to_dense(self):
        """Return the matrix as a dense uint8 array."""
        dense = np.zeros((self.n_checks, self.n_vars), dtype=np.uint8)
        dense[self.edge_checks, self.edge_vars] = 1
        return dense

    def syndrome(self, bits):
        """Return H·bits over GF(2) as a uint8 vector."""
        bits = np.asarray(bits, dtype=np.int64)
        if bits.shape != (self.n_vars,):
            msg = (
                f"The word has length {bits.size}, expected {self.n_vars}."
            )
            raise ValueError(msg)

        sums = np.add.reduceat(bits[self.edge_vars], self.check_starts)
        return (sums % 2).astype(np.uint8)

    def is_codeword(self, bits):
        """Check whether a word has zero syndrome."""
        return not self.syndrome(bits).any()

    def __eq__(self, other):
        if not isinstance(other, ParityCheckMatrix):
            return NotImplemented
        return (
            self.n_vars == other.n_vars
            and self.check_to_vars == other.check_to_vars
        )

    def __hash__(self):
        return hash((self.n_vars, self.check_to_vars))

    def __repr__(self):
        cls_name = type(self).__name__
        return (
            f"{cls_name}(n_checks={self.n_checks}, n_vars={self.n_vars}, "
            f"n_edges={self.n_edges})"
        )


class SubcodeView:
    """Hold the code induced by a subset of checks of a parent code."""

    parent = FixedValue()
    row_subset = FixedValue()
    var_subset = FixedValue()
    row_fraction = FixedValue()
    local = FixedValue()

    def __init__(self, parent, rows):
        """Initialise the subcode from a set of parent checks.

        Parameters
        ----------
        parent : ParityCheckMatrix
            the full code
        rows : iterable of int
            the parent checks forming the subcode

        """
        rows = sorted({int(m) for m in rows})
        if not rows:
            msg = "A subcode needs at least one check."
            raise ValueError(msg)

        if rows[0] < 0 or rows[-1] >= parent.n_checks:
            msg = f"The subcode rows must be in [0, {parent.n_checks})."
            raise ValueError(msg)

        self.parent = parent
        self.row_subset = tuple(rows)
        self.row_fraction = len(rows) / parent.n_checks

        variables = np.unique(
            np.concatenate([parent.check_to_vars[m] for m in rows])
        )
        self.var_subset = variables

        # renumber the variables to 0..M-1 for decoding
        position = np.full(parent.n_vars, -1, dtype=np.int64)
        position[variables] = np.arange(variables.size)
        local_rows = [position[list(parent.check_to_vars[m])] for m in rows]
        self.local = ParityCheckMatrix(local_rows, n_vars=variables.size)

    @property
    def n_vars(self):
        """Return the number of variables in the subcode."""
        return int(self.var_subset.size)

    def restrict(self, values):
        """Select the entries of a full-length vector in the subcode."""
        values = np.asarray(values)
        if values.shape[-1] != self.parent.n_vars:
            msg = (
                f"The vector has length {values.shape[-1]}, expected "
                f"{self.parent.n_vars}."
            )
            raise ValueError(msg)
        return values[..., self.var_subset]

    def __repr__(self):
        cls_name = type(self).__name__
        return (
            f"{cls_name}(rows={len(self.row_subset)}/"
            f"{self.parent.n_checks}, vars={self.n_vars})"
        )


def extract_subcode(h, row_fraction=None, rows=None):
    """Extract the subcode of a fraction of rows or of explicit rows.

    Parameters
    ----------
    h : ParityCheckMatrix
        the full code
    row_fraction : float, optional
        the fraction of checks in (0, 1], taken as a prefix. The number
        of rows is row_fraction·n_checks rounded half up.
    rows : iterable of int, optional
        the explicit checks, overriding row_fraction

    Returns
    -------
    SubcodeView
        the subcode

    """
    if rows is not None:
        return SubcodeView(h, rows)

    if row_fraction is None:
        msg = "Either row_fraction or rows must be given."
        raise ValueError(msg)

    if not 0 < row_fraction <= 1:
        msg = f"The row fraction must be in (0, 1] ({row_fraction})."
        raise ValueError(msg)

    n_rows = math.floor(row_fraction * h.n_checks + 0.5)
    if n_rows == 0:
        msg = (
            f"The row fraction {row_fraction} selects no row of a code "
            f"with {h.n_checks} checks."
        )
        raise ValueError(msg)

    return SubcodeView(h, range(n_rows))


def regular_code(n_vars=360, col_weight=3, row_weight=6, seed=0):
    """Construct a regular LDPC code with Gallager's band construction.

    The first band of checks covers consecutive variables, the others
    are random column permutations of it.

    Parameters
    ----------
    n_vars : int, optional
        the block length. Default to 360.
    col_weight : int, optional
        the number of checks per variable. Default to 3.
    row_weight : int, optional
        the number of variables per check. Default to 6.
    seed : int, optional
        the seed of the permutations. Default to 0.

    Returns
    -------
    ParityCheckMatrix
        the code with n_vars·col_weight/row_weight checks

    """
    if n_vars % row_weight:
        msg = (
            f"The block length {n_vars} is not a multiple of the row "
            f"weight {row_weight}."
        )
        raise ValueError(msg)

    rng = substream(seed, Purpose.CODE, n_vars, col_weight, row_weight)
    band = np.arange(n_vars).reshape(-1, row_weight)

    rows = list(band)
    for _ in range(1, col_weight):
        perm = rng.permutation(n_vars)
        rows.extend(perm[band])

    return ParityCheckMatrix(rows, n_vars=n_vars)
