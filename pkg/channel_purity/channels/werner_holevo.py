import math

import numpy as np

from channel_purity.channels import Channel
from channel_purity.linalg import check_square
from channel_purity.utils import InvalidDimension


def wh_channel(d):
    """Werner-Holevo channel on d x d matrices, one Kraus operator
    (|i><j| - |j><i|) / sqrt(d - 1) per pair i < j.

    >>> ch = wh_channel(3)
    >>> len(ch), ch.dim_in
    (3, 3)
    >>> out = ch(np.diag([1, 0, 0]))
    >>> np.round(out.real, 12) + 0.0
    array([[0. , 0. , 0. ],
           [0. , 0.5, 0. ],
           [0. , 0. , 0.5]])
    """
    d = int(d)
    if d < 3:
        raise InvalidDimension("Werner-Holevo channel needs d >= 3, got {}"
                               .format(d))
    scale = 1 / math.sqrt(d - 1)
    kraus = []
    for i in range(d):
        for j in range(i + 1, d):
            a = np.zeros((d, d))
            a[i, j] = scale
            a[j, i] = -scale
            kraus.append(a)
    return Channel(kraus)


def wh_linear(rho):
    """1/(d-1) (tr(rho) 1 - rho^T), transpose in the computational basis."""
    rho = check_square(rho)
    d = len(rho)
    if d < 2:
        raise InvalidDimension("need d >= 2, got {}".format(d))
    return (np.trace(rho) * np.eye(d) - rho.T) / (d - 1)


def swap_operator(d):
    f = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            f[i * d + j, j * d + i] = 1
    return f


def antisymmetric_projector(d):
    """Projector onto the antisymmetric subspace of C^d (x) C^d.

    >>> int(round(np.trace(antisymmetric_projector(3))))
    3
    """
    return (np.eye(d * d) - swap_operator(d)) / 2


if __name__ == "__main__":
    import doctest
    doctest.testmod()
