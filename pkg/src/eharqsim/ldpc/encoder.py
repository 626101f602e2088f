import numpy as np

from eharqsim.ldpc.matrix import ParityCheckMatrix
from eharqsim.utils.model import FixedValue, PositiveNumber
from eharqsim.utils.parse import as_bit_vector


class GeneratorMapping:
    """Map information words to codewords of a parity-check matrix.

    The codeword bits at info_positions are the information bits, the
    bits at parity_positions follow from the reduced row echelon form
    of the parity-check matrix.
    """

    n_vars = PositiveNumber(int, strict=True)
    rank = PositiveNumber(int, strict=True)
    info_positions = FixedValue()
    parity_positions = FixedValue()
    parity_solver = FixedValue()

    def __init__(self, n_vars, info_positions, parity_positions, solver):
        """Initialise the mapping.

        Parameters
        ----------
        n_vars : int
            the block length
        info_positions : array-like of int
            the codeword positions carrying information bits
        parity_positions : array-like of int
            the pivot positions, one per independent check
        solver : array-like, shape (rank, n_info)
            the parity bit k is solver[k]·info over GF(2)

        """
        self.n_vars = n_vars
        self.rank = len(parity_positions)
        self.info_positions = np.asarray(info_positions, dtype=np.int64)
        self.parity_positions = np.asarray(parity_positions, dtype=np.int64)
        self.parity_solver = np.asarray(solver, dtype=np.uint8)

    @property
    def n_info(self):
        """Return the dimension of the code."""
        return int(self.info_positions.size)

    def __repr__(self):
        cls_name = type(self).__name__
        return f"{cls_name}(n_vars={self.n_vars}, n_info={self.n_info})"


def gf2_row_reduce(dense):
    """Reduce a binary matrix to reduced row echelon form over GF(2).

    Parameters
    ----------
    dense : array-like, shape (m, n)
        the 0/1 matrix

    Returns
    -------
    reduced : numpy.ndarray
        the nonzero rows of the reduced matrix, shape (rank, n)
    pivots : list of int
        the pivot column of each row

    """
    work = np.array(dense, dtype=np.uint8) % 2
    n_rows, n_cols = work.shape
    pivots = []
    row = 0

    for col in range(n_cols):
        if row == n_rows:
            break

        candidates = np.flatnonzero(work[row:, col])
        if candidates.size == 0:
            continue

        pivot = row + candidates[0]
        if pivot != row:
            work[[row, pivot]] = work[[pivot, row]]

        # clear the column everywhere else
        others = np.flatnonzero(work[:, col])
        others = others[others != row]
        work[others] ^= work[row]

        pivots.append(col)
        row += 1

    return work[:row], pivots


def derive_generator(h):
    """Derive a systematic encoder of a parity-check matrix.

    Parameters
    ----------
    h : ParityCheckMatrix or array-like
        the parity-check matrix, or its dense 0/1 form

    Returns
    -------
    GeneratorMapping
        the encoder, with n_vars - rank information positions

    """
    if isinstance(h, ParityCheckMatrix):
        dense = h.to_dense()
    else:
        dense = np.asarray(h)
        if dense.ndim != 2:
            msg = "The parity-check matrix must be two-dimensional."
            raise ValueError(msg)

    reduced, pivots = gf2_row_reduce(dense)
    if not pivots:
        msg = "The parity-check matrix has rank 0 and defines no code."
        raise ValueError(msg)

    n_vars = dense.shape[1]
    info = np.setdiff1d(np.arange(n_vars), pivots)
    if info.size == 0:
        msg = "The parity-check matrix has full column rank, no info bit."
        raise ValueError(msg)

    return GeneratorMapping(n_vars, info, pivots, reduced[:, info])


def encode(g, info):
    """Encode an information word.

    Parameters
    ----------
    g : GeneratorMapping
        the encoder
    info : array-like of 0/1
        the information bits, of length g.n_info

    Returns
    -------
    codeword : numpy.ndarray
        the uint8 codeword of length g.n_vars

    """
    info = as_bit_vector(info, length=g.n_info, label="information word")

    codeword = np.zeros(g.n_vars, dtype=np.uint8)
    codeword[g.info_positions] = info
    parity = (g.parity_solver.astype(np.int64) @ info) % 2
    codeword[g.parity_positions] = parity

    return codeword
