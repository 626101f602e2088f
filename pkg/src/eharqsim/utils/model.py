import math
from pathlib import Path


class FixedValue:
    """A descriptor with fixed value.

    For an attribute named "name", it stores the value in "_name" and it
    cannot be changed afterwards, although it is possible to change the
    value of "_name" directly.
    """

    def __set_name__(self, owner, name):
        self.public_name = name
        self.private_name = f"_{name}"

    def __get__(self, instance, owner=None):
        if instance is None:
            return self
        return getattr(instance, self.private_name)

    def __set__(self, instance, value):
        self._refuse_reassignment(instance)
        setattr(instance, self.private_name, self.convert(value))

    def _refuse_reassignment(self, instance):
        if hasattr(instance, self.private_name):
            msg = f"can't set attribute '{self.public_name}'"
            raise AttributeError(msg)

    def convert(self, value):
        """Validate and convert the value, identity by default."""
        return value


class Directory(FixedValue):
    """Represent a directory."""

    def __init__(self, *, undefined_ok=False, must_exist=False):
        """Initialise the directory descriptor.

        Parameters
        ----------
        undefined_ok : bool, optional
            whether the directory can be None. Default to False.
        must_exist : bool, optional
            whether to check for the existence of directory. Default to
            False, and it will be created if the path is invalid.

        """
        self.undefined_ok = undefined_ok
        self.must_exist = must_exist

    def convert(self, value):
        """Resolve the directory and create it if necessary."""
        if value is None and self.undefined_ok:
            return None

        dir_ = Path() if value is None else Path(value).resolve()

        if self.must_exist and not dir_.is_dir():
            msg = f"The directory {dir_} does not exist."
            raise FileNotFoundError(msg)

        if not dir_.is_dir():
            dir_.mkdir(parents=True, exist_ok=True)

        return dir_


class FilePath(FixedValue):
    """Represent a file path."""

    def __init__(self, *, undefined_ok=False, must_exist=False):
        """Initialise the file path descriptor.

        Parameters
        ----------
        undefined_ok : bool, optional
            whether the file path can be None. Default to False.
        must_exist : bool, optional
            whether to check for the existence of the file. Default to
            False.

        """
        self.undefined_ok = undefined_ok
        self.must_exist = must_exist

    def convert(self, value):
        """Resolve the file path and check its existence."""
        if value is None and self.undefined_ok:
            return None

        if value is None:
            msg = f"The file path '{self.public_name}' cannot be None."
            raise ValueError(msg)

        fp = Path(value).resolve()
        if self.must_exist and not fp.is_file():
            msg = f"The file {fp} does not exist."
            raise FileNotFoundError(msg)

        return fp


class PositiveNumber(FixedValue):
    """Represent a non-negative (or strictly positive) number."""

    def __init__(self, num_type=int, *, strict=False, undefined_ok=False):
        """Initialise the positive number descriptor.

        Parameters
        ----------
        num_type : type, optional
            the data type of the number. Default to int.
        strict : bool, optional
            whether zero is rejected. Default to False.
        undefined_ok : bool, optional
            whether the number can be None. Default to False.

        """
        self.num_type = num_type
        self.strict = strict
        self.undefined_ok = undefined_ok

    def convert(self, value):
        """Check the number is finite and not negative."""
        if value is None and self.undefined_ok:
            return None

        num = self.num_type(value)
        if not math.isfinite(num):
            msg = f"The attribute '{self.public_name}' must be finite."
            raise ValueError(msg)

        if num < 0 or (self.strict and num == 0):
            bound = "positive" if self.strict else "non-negative"
            msg = (
                f"The attribute '{self.public_name}' must be {bound} "
                f"({num})."
            )
            raise ValueError(msg)

        return num


class FiniteNumber(FixedValue):
    """Represent a finite real number."""

    def convert(self, value):
        """Check the number is finite."""
        num = float(value)
        if not math.isfinite(num):
            msg = f"The attribute '{self.public_name}' must be finite."
            raise ValueError(msg)
        return num


class Probability(FixedValue):
    """Represent a probability in [0, 1]."""

    def __init__(self, *, undefined_ok=False):
        """Initialise the probability descriptor.

        Parameters
        ----------
        undefined_ok : bool, optional
            whether the probability can be None. Default to False.

        """
        self.undefined_ok = undefined_ok

    def convert(self, value):
        """Check the value lies in [0, 1]."""
        if value is None and self.undefined_ok:
            return None

        prob = float(value)
        if not 0 <= prob <= 1:
            msg = (
                f"The attribute '{self.public_name}' must be a "
                f"probability in [0, 1] ({prob})."
            )
            raise ValueError(msg)
        return prob


class Choice(FixedValue):
    """Represent one of a few case-insensitive string options."""

    def __init__(self, *options):
        """Initialise the choice descriptor.

        Parameters
        ----------
        options : str
            the accepted values, stored in the case given here.

        """
        self.options = options

    def convert(self, value):
        """Match the value against the options."""
        for option in self.options:
            if str(value).lower() == option.lower():
                return option

        # avoid import cycle with utils.parse
        quoted = ", ".join(f"'{opt}'" for opt in self.options)
        msg = (
            f"The attribute '{self.public_name}' must be one of "
            f"{quoted} ('{value}')."
        )
        raise ValueError(msg)
