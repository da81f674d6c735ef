import csv
import math


class NotHermitian(ValueError):
    """Matrix fails the Hermitian symmetry check."""


class InvalidExponent(ValueError):
    """Schatten exponent outside (1, inf]."""


class InvalidDimension(ValueError):
    """Dimension outside the supported range."""


class DimensionMismatch(ValueError):
    """Operand shapes do not fit together."""


class ShapeMismatch(ValueError):
    """Tensor vectors with incompatible factor structure."""


class NotUnitary(ValueError):
    """Matrix fails the unitarity check."""


class NotTracePreserving(ValueError):
    """Kraus family with sum A^dagger A != 1."""


class NoConvergence(ArithmeticError):
    """Iteration budget exhausted."""


class BracketFailure(ArithmeticError):
    """Root-finding bracket endpoints do not change sign."""


def get_val(val, minimum, maximum, kind=int):
    '''Helper function to get values in given range

    >>> get_val("3", 3, 100)
    3
    >>> get_val("1e-6", 0, 1, kind=float)
    1e-06
    >>> get_val(2, 3, 100)
    Traceback (most recent call last):
    ...
    ValueError: 2 not in [3, 100]
    '''
    if isinstance(val, str):
        val = kind(val)
    if not minimum <= val <= maximum:
        raise ValueError("{} not in [{}, {}]".format(val, minimum, maximum))
    return val


def format_float(x):
    """Decimal text that reads back to the same double.

    >>> format_float(0.1)
    '0.10000000000000001'
    >>> format_float(float('inf'))
    'inf'
    >>> float(format_float(1 / 3)) == 1 / 3
    True
    """
    x = float(x)
    if math.isinf(x):
        return 'inf' if x > 0 else '-inf'
    return '{:.17g}'.format(x)


def write_csv(fh, header, rows):
    """Write ``rows`` under ``header``, ``\\n`` line endings, floats at 17
    significant digits."""
    writer = csv.writer(fh, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, float) else v
                         for v in row])


def read_csv(csv_file):
    """Read a file written by ``write_csv`` back into float tuples."""
    with open(csv_file, newline='') as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [tuple(float(v) for v in row) for row in reader if row]
    return header, rows


if __name__ == "__main__":
    import doctest
    doctest.testmod()
