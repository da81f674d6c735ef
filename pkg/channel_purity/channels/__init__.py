import json
import math

import numpy as np

from channel_purity import config
from channel_purity.linalg import dagger, eig_hermitian, kron
from channel_purity.utils import (DimensionMismatch, NotTracePreserving,
                                  ShapeMismatch, get_val)


class Channel:
    """Completely positive map in Kraus form, rho -> sum_x A_x rho A_x^dagger.

    Args:
        kraus: Non-empty sequence of ``dim_out x dim_in`` matrices.
        check (bool, optional): Reject families with
            ``sum A^dagger A != 1`` (beyond ``config.TOL_TP``). Pass
            ``False`` to load deliberately broken channels for verification.
        input_factors (tuple, optional): Input dimensions of the factors for
            channels built with :func:`tensor`.

    >>> ch = Channel([np.eye(2)])
    >>> ch.dim_in, ch.dim_out, len(ch)
    (2, 2, 1)
    >>> Channel([np.eye(2), np.eye(2)])
    Traceback (most recent call last):
    ...
    channel_purity.utils.NotTracePreserving: sum A^dagger A differs from 1 by 1.41
    """
    def __init__(self, kraus, check=True, input_factors=None):
        ops = [np.array(k, dtype=complex) for k in kraus]
        if not ops:
            raise ValueError("Kraus family must not be empty")
        shape = ops[0].shape
        for op in ops:
            if op.ndim != 2 or op.shape != shape:
                raise DimensionMismatch(
                    "Kraus operators must share one 2-d shape, got {} and {}"
                    .format(shape, op.shape))
        self.dim_out, self.dim_in = shape
        self.stack = np.stack(ops)
        self.stack.setflags(write=False)
        if input_factors is None:
            input_factors = (self.dim_in,)
        self.input_factors = tuple(input_factors)
        assert math.prod(self.input_factors) == self.dim_in, \
            (self.input_factors, self.dim_in)
        if check:
            residual = tp_residual(self)
            if residual > config.TOL_TP:
                raise NotTracePreserving(
                    "sum A^dagger A differs from 1 by {:.3g}".format(residual))

    @property
    def kraus(self):
        return list(self.stack)

    def __len__(self):
        return len(self.stack)

    def __call__(self, rho):
        return apply(self, rho)

    def __repr__(self):
        return "Channel(dim_in={}, dim_out={}, kraus={})".format(
            self.dim_in, self.dim_out, len(self))


class TensorVector:
    """Vector in an N-fold tensor product, amplitudes indexed by the
    multi-index (row-major, last factor fastest).

    >>> v = TensorVector([2, 2], [1, 0, 0, 1])
    >>> v.dims, v.N
    ((2, 2), 2)
    >>> round(v.norm(), 12)
    1.414213562373
    """
    def __init__(self, dims, amplitudes):
        dims = tuple(int(d) for d in dims)
        if not dims or min(dims) < 1:
            raise ShapeMismatch("bad factor dimensions {}".format(dims))
        amps = np.array(amplitudes, dtype=complex)
        if amps.size != math.prod(dims):
            raise ShapeMismatch("{} amplitudes do not fill dims {}".format(
                amps.size, dims))
        amps = amps.reshape(dims)
        amps.setflags(write=False)
        self.dims = dims
        self.amplitudes = amps

    @property
    def N(self):
        return len(self.dims)

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def scaled(self, c):
        return TensorVector(self.dims, c * self.amplitudes)

    def tensor(self, other):
        """Factor-wise product: factor a of the result is H_a (x) K_a.

        >>> e = TensorVector([2, 2], [0, 1, 0, 0])
        >>> e.tensor(e).dims
        (4, 4)
        """
        if self.N != other.N:
            raise ShapeMismatch("cannot regroup N={} with N={}".format(
                self.N, other.N))
        n = self.N
        outer = np.multiply.outer(self.amplitudes, other.amplitudes)
        order = [ax for a in range(n) for ax in (a, n + a)]
        dims = [dv * dw for dv, dw in zip(self.dims, other.dims)]
        return TensorVector(dims, np.transpose(outer, order).reshape(dims))

    def transform(self, unitaries):
        """Apply one matrix per factor, (U_1 (x) ... (x) U_N) v."""
        amps = self.amplitudes
        for a, u in enumerate(unitaries):
            amps = np.moveaxis(np.tensordot(u, amps, axes=([1], [a])), 0, a)
        return TensorVector(self.dims, amps)

    def __repr__(self):
        return "TensorVector(dims={})".format(list(self.dims))


def apply(ch, rho):
    rho = np.asarray(rho)
    if rho.shape != (ch.dim_in, ch.dim_in):
        raise DimensionMismatch("input of shape {} for a channel on {}x{}"
                                .format(rho.shape, ch.dim_in, ch.dim_in))
    return np.einsum('xij,jk,xlk->il', ch.stack, rho, ch.stack.conj())


def apply_adjoint(ch, x):
    """Dual map x -> sum_x A_x^dagger x A_x."""
    x = np.asarray(x)
    if x.shape != (ch.dim_out, ch.dim_out):
        raise DimensionMismatch("input of shape {} for a dual on {}x{}"
                                .format(x.shape, ch.dim_out, ch.dim_out))
    return np.einsum('xji,jk,xkl->il', ch.stack.conj(), x, ch.stack)


def identity_channel(d):
    return Channel([np.eye(d)])


def tensor(ch1, ch2):
    """Product channel with Kraus family {A_x (x) B_y}."""
    return Channel([kron(a, b) for a in ch1.stack for b in ch2.stack],
                   check=False,
                   input_factors=ch1.input_factors + ch2.input_factors)


def choi(ch):
    """(id (x) S) applied to sum_jk |jj><kk| (unnormalized).

    Column j of A_x stacked with the input index slowest is
    (1 (x) A_x)|Omega>, so the Choi matrix is a sum of rank-one terms.

    >>> choi(identity_channel(2)).real
    array([[1., 0., 0., 1.],
           [0., 0., 0., 0.],
           [0., 0., 0., 0.],
           [1., 0., 0., 1.]])
    """
    vecs = np.transpose(ch.stack, (0, 2, 1)).reshape(len(ch), -1)
    return vecs.T @ vecs.conj()


def tp_residual(ch):
    gram = np.einsum('xji,xjk->ik', ch.stack.conj(), ch.stack)
    return float(np.linalg.norm(gram - np.eye(ch.dim_in)))


def cp_residual(ch):
    """Smallest Choi eigenvalue; >= 0 iff the map is CP."""
    return eig_hermitian(choi(ch)).min


def channel_to_vector(ch):
    """Kraus family as a vector with dims (#kraus, dim_out, dim_in)."""
    return TensorVector((len(ch), ch.dim_out, ch.dim_in), ch.stack)


def parse_complex(pair):
    """
    >>> parse_complex([0.5, -1])
    (0.5-1j)
    """
    if len(pair) != 2:
        raise ValueError("complex entry must be [re, im], got {!r}"
                         .format(pair))
    return complex(float(pair[0]), float(pair[1]))


def dump_complex(z):
    return [float(z.real), float(z.imag)]


def parse_matrix(rows, shape):
    m = np.array([[parse_complex(e) for e in row] for row in rows],
                 dtype=complex)
    if m.shape != shape:
        raise DimensionMismatch("matrix of shape {} where {} expected"
                                .format(m.shape, shape))
    return m


def parse_channel(field, check=True):
    """
    >>> f = {
    ... "dim_in": 2,
    ... "dim_out": 2,
    ... "kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]
    ... }
    >>> parse_channel(f)
    Channel(dim_in=2, dim_out=2, kraus=1)
    """
    dim_in = get_val(field["dim_in"], 1, 4096)
    dim_out = get_val(field["dim_out"], 1, 4096)
    kraus = [parse_matrix(k, (dim_out, dim_in)) for k in field["kraus"]]
    return Channel(kraus, check=check)


def dump_channel(ch):
    return {
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "kraus": [[[dump_complex(z) for z in row] for row in op]
                  for op in ch.stack],
    }


def parse_tensor_vector(field):
    """
    >>> v = parse_tensor_vector({"dims": [2, 2],
    ...                          "amplitudes": [[1, 0], [0, 0], [0, 0], [0, 0]]})
    >>> v
    TensorVector(dims=[2, 2])
    """
    dims = [get_val(d, 1, 4096) for d in field["dims"]]
    amps = [parse_complex(e) for e in field["amplitudes"]]
    return TensorVector(dims, amps)


def dump_tensor_vector(v):
    return {
        "dims": list(v.dims),
        "amplitudes": [dump_complex(z) for z in v.amplitudes.ravel()],
    }


def load_channel(path, check=True):
    with open(path) as fh:
        return parse_channel(json.load(fh), check=check)


def load_tensor_vector(path):
    with open(path) as fh:
        return parse_tensor_vector(json.load(fh))


if __name__ == "__main__":
    import doctest
    doctest.testmod()
