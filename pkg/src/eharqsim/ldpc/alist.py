"""Read and write parity-check matrices in the alist format.

The layout is, one item per line:

    n_vars n_checks
    max_col_degree max_row_degree
    col_degree_1 ... col_degree_n
    row_degree_1 ... row_degree_m
    n_vars lines of checks per variable (1-indexed)
    n_checks lines of variables per check (1-indexed)

Neighbour lists may be padded with 0 up to the maximum degree.
"""

from pathlib import Path

from eharqsim.ldpc.matrix import ParityCheckMatrix


class _Lines:
    """Iterate over non-blank lines while tracking line numbers."""

    def __init__(self, text):
        self.numbered = [
            (k, line.split())
            for k, line in enumerate(text.splitlines(), start=1)
            if line.strip()
        ]
        self.cursor = 0

    def next_ints(self, section, expected=None):
        if self.cursor >= len(self.numbered):
            last = self.numbered[-1][0] if self.numbered else 0
            msg = (
                f"alist line {last + 1}: unexpected end of input in the "
                f"{section} section."
            )
            raise ValueError(msg)

        line_no, tokens = self.numbered[self.cursor]
        self.cursor += 1

        try:
            values = [int(tok) for tok in tokens]
        except ValueError:
            msg = f"alist line {line_no}: non-integer entry in the {section}."
            raise ValueError(msg) from None

        if expected is not None and len(values) != expected:
            msg = (
                f"alist line {line_no}: the {section} has {len(values)} "
                f"entries, expected {expected}."
            )
            raise ValueError(msg)

        return line_no, values

    def remaining(self):
        return self.numbered[self.cursor :]


def _neighbours(lines, count, degrees, upper, section):
    lists = []
    for node in range(count):
        line_no, values = lines.next_ints(section)
        entries = [v for v in values if v != 0]

        if len(entries) != degrees[node]:
            msg = (
                f"alist line {line_no}: the {section} lists "
                f"{len(entries)} neighbours for node {node + 1}, but its "
                f"degree is {degrees[node]}."
            )
            raise ValueError(msg)

        bad = [v for v in entries if not 1 <= v <= upper]
        if bad:
            msg = (
                f"alist line {line_no}: index {bad[0]} in the {section} "
                f"is outside [1, {upper}]."
            )
            raise ValueError(msg)

        lists.append(sorted(v - 1 for v in entries))
    return lists


def parse_alist(text):
    """Parse the alist text of a parity-check matrix.

    Parameters
    ----------
    text : str
        the content of an alist file

    Returns
    -------
    h : ParityCheckMatrix
        the matrix

    Raises
    ------
    ValueError
        if the text is malformed, the message names the line number

    """
    lines = _Lines(text)

    line_no, (n_vars, n_checks) = lines.next_ints("header", expected=2)
    if n_vars <= 0 or n_checks <= 0:
        msg = f"alist line {line_no}: the dimensions must be positive."
        raise ValueError(msg)

    lines.next_ints("maximum degree line", expected=2)
    _, col_degrees = lines.next_ints("column degree list", expected=n_vars)
    _, row_degrees = lines.next_ints("row degree list", expected=n_checks)

    cols = _neighbours(
        lines, n_vars, col_degrees, n_checks, "column neighbour list"
    )
    rows = _neighbours(
        lines, n_checks, row_degrees, n_vars, "row neighbour list"
    )

    if (rest := lines.remaining()) and any(
        any(tok != "0" for tok in tokens) for _, tokens in rest
    ):
        msg = (
            f"alist line {rest[0][0]}: unexpected content after the row "
            "neighbour lists."
        )
        raise ValueError(msg)

    h = ParityCheckMatrix(rows, n_vars=n_vars)

    # the two halves of the file must describe the same graph
    for k, col in enumerate(cols):
        if tuple(col) != h.var_to_checks[k]:
            msg = (
                f"alist: the column list of variable {k + 1} disagrees "
                "with the row lists."
            )
            raise ValueError(msg)

    return h


def read_alist(file_path):
    """Read an alist file."""
    file_path = Path(file_path)
    if not file_path.is_file():
        msg = f"The code file {file_path.resolve()} does not exist."
        raise FileNotFoundError(msg)

    return parse_alist(file_path.read_text())


def write_alist(h, file_path=None):
    """Format a matrix as alist text, without zero padding.

    Parameters
    ----------
    h : ParityCheckMatrix
        the matrix
    file_path : str or pathlib.Path, optional
        where the text is also written. Default to None.

    Returns
    -------
    text : str
        the alist text

    """
    col_degrees = [len(c) for c in h.var_to_checks]
    row_degrees = [len(r) for r in h.check_to_vars]

    out = [
        f"{h.n_vars} {h.n_checks}",
        f"{max(col_degrees)} {max(row_degrees)}",
        " ".join(map(str, col_degrees)),
        " ".join(map(str, row_degrees)),
    ]
    out.extend(" ".join(str(m + 1) for m in col) for col in h.var_to_checks)
    out.extend(" ".join(str(k + 1) for k in row) for row in h.check_to_vars)
    text = "\n".join(out) + "\n"

    if file_path is not None:
        Path(file_path).write_text(text)

    return text
