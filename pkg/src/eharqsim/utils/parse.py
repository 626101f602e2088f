import numpy as np


def quote_iterable(iterable):
    """Produce quoted and comma-delimited string from an iterable.

    It converts, e.g. ["abc", "def", "ghi"] to
    "'abc', 'def' and 'ghi'". These are more friendly for stdout or
    stderr.

    Parameters
    ----------
    iterable : any iterable
        the iterable to be processed.

    Returns
    -------
    comma : str
        the quoted and comma-delimited string

    """
    iterable = list(iterable)
    if not iterable:
        return ""
    if len(iterable) == 1:
        return f"'{iterable[0]}'"

    quoted = [f"'{entry}'" for entry in iterable]
    comma = ", ".join(quoted[:-1])
    comma += f" and {quoted[-1]}"

    return comma


def as_bit_vector(bits, length=None, label="bit vector"):
    """Convert an array-like of 0/1 to a uint8 vector.

    Parameters
    ----------
    bits : array-like
        the bits
    length : int, optional
        the expected length. Default to None, no length check.
    label : str, optional
        the name used in error messages. Default to "bit vector".

    Returns
    -------
    the bits as a 1D numpy.uint8 array

    """
    arr = np.asarray(bits)
    if arr.ndim != 1:
        msg = f"The {label} must be one-dimensional."
        raise ValueError(msg)

    if length is not None and arr.size != length:
        msg = f"The {label} has length {arr.size}, expected {length}."
        raise ValueError(msg)

    if arr.size and not np.isin(arr, (0, 1)).all():
        msg = f"The {label} must only contain 0 and 1."
        raise ValueError(msg)

    return arr.astype(np.uint8)


def as_finite_vector(values, length=None, label="vector"):
    """Convert an array-like to a finite float64 vector.

    Parameters
    ----------
    values : array-like
        the values
    length : int, optional
        the expected length. Default to None, no length check.
    label : str, optional
        the name used in error messages. Default to "vector".

    Returns
    -------
    the values as a 1D numpy.float64 array

    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        msg = f"The {label} must be one-dimensional."
        raise ValueError(msg)

    if length is not None and arr.size != length:
        msg = f"The {label} has length {arr.size}, expected {length}."
        raise ValueError(msg)

    if not np.isfinite(arr).all():
        msg = f"The {label} contains non-finite values."
        raise ValueError(msg)

    return arr
