"""
Dense complex linear algebra at small dimension.

Matrices and pure states are plain ``numpy`` arrays (``complex128``);
eigenvalues travel as :class:`Spectrum`. The Hermitian eigensolver is a
cyclic complex Jacobi iteration, which is unconditionally stable at the
sizes used here (up to a few hundred).

  >>> eig_hermitian(np.eye(3))
  Spectrum([1.0, 1.0, 1.0])
  >>> rho = np.eye(3) / 3
  >>> '{:.12f}'.format(schatten_norm(rho, 2))
  '0.577350269190'
  >>> partial_trace(np.eye(9), (3, 3), keep=0).real
  array([[3., 0., 0.],
         [0., 3., 0.],
         [0., 0., 3.]])
"""

import logging
import math

import numpy as np

from channel_purity import config
from channel_purity.utils import (DimensionMismatch, InvalidExponent,
                                  NoConvergence, NotHermitian, NotUnitary)

log = logging.getLogger(__name__)


class Exponent:
    """Schatten exponent p in (1, inf].

    The infinite exponent is its own variant, tested with
    :attr:`is_infinite`, never a large float.

    >>> Exponent.parse('inf').is_infinite
    True
    >>> Exponent.parse('4.7823')
    Exponent(4.7823)
    >>> Exponent.coerce(float('inf')) == Exponent.infinite()
    True
    >>> Exponent(1)
    Traceback (most recent call last):
    ...
    channel_purity.utils.InvalidExponent: p must be in (1, inf], got 1.0
    """
    INF_NAMES = ('inf', 'infinity', '+inf')

    def __init__(self, value=math.inf):
        value = float(value)
        if math.isnan(value) or not value > 1:
            raise InvalidExponent(
                "p must be in (1, inf], got {}".format(value))
        self.value = value

    @classmethod
    def infinite(cls):
        return cls(math.inf)

    @classmethod
    def parse(cls, text):
        text = text.strip().lower()
        if text in cls.INF_NAMES:
            return cls.infinite()
        try:
            return cls(float(text))
        except ValueError as e:
            if isinstance(e, InvalidExponent):
                raise
            raise InvalidExponent("not an exponent: {!r}".format(text))

    @classmethod
    def coerce(cls, p):
        if isinstance(p, Exponent):
            return p
        if isinstance(p, str):
            return cls.parse(p)
        return cls(p)

    @property
    def is_infinite(self):
        return math.isinf(self.value)

    def __float__(self):
        return self.value

    def __eq__(self, other):
        if not isinstance(other, Exponent):
            return NotImplemented
        return self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __str__(self):
        return 'inf' if self.is_infinite else '{:g}'.format(self.value)

    def __repr__(self):
        return "Exponent({})".format(self)


class Spectrum:
    """Real eigenvalues sorted descending.

    >>> s = Spectrum([1/12] * 8 + [1/3])
    >>> s.multiplicities()
    [(0.333333333333, 1), (0.083333333333, 8)]
    >>> '{:.10f}'.format(s.norm('inf'))
    '0.3333333333'
    >>> s.is_density()
    True
    """
    def __init__(self, values):
        values = np.sort(np.asarray(values, dtype=float).ravel())[::-1]
        values = values.copy()
        values.setflags(write=False)
        self.values = values

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __repr__(self):
        return "Spectrum({})".format(
            [round(float(x), 12) + 0.0 for x in self.values])

    @property
    def max(self):
        return float(self.values[0])

    @property
    def min(self):
        return float(self.values[-1])

    def norm(self, p):
        """(sum |l|^p)^(1/p); p = inf gives max |l|."""
        p = Exponent.coerce(p)
        a = np.abs(self.values)
        top = float(a.max()) if a.size else 0.0
        if top == 0.0:
            return 0.0
        if p.is_infinite:
            return top
        # Scale by the largest entry to keep |l|^p representable
        return top * float(np.sum((a / top) ** p.value)) ** (1 / p.value)

    def multiplicities(self, tol=1e-9):
        """Group eigenvalues closer than ``tol`` into (value, count)."""
        groups = []
        for v in self.values:
            if groups and abs(groups[-1][-1] - v) <= tol:
                groups[-1].append(v)
            else:
                groups.append([v])
        return [(round(float(np.mean(g)), 12) + 0.0, len(g)) for g in groups]

    def is_density(self, tol_psd=None, tol_sum=None):
        tol_psd = config.TOL_PSD if tol_psd is None else tol_psd
        tol_sum = config.TOL_SUM if tol_sum is None else tol_sum
        return (self.min >= -tol_psd
                and abs(float(np.sum(self.values)) - 1) <= tol_sum)


def dagger(m):
    return np.conj(np.transpose(m))


def check_square(m):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch("expected a square matrix, got shape {}"
                                .format(m.shape))
    return m


def hermiticity_residual(m):
    m = check_square(m)
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def check_hermitian(m, tol=None):
    tol = config.TOL_HERM if tol is None else tol
    m = check_square(m)
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    residual = hermiticity_residual(m)
    if residual > tol * scale:
        raise NotHermitian("|m - m^dagger|_max = {:.3g} > {:.3g}"
                           .format(residual, tol * scale))
    return m


def check_unitary(u, tol=None):
    tol = config.TOL_UNITARY if tol is None else tol
    u = check_square(u)
    residual = float(np.max(np.abs(dagger(u) @ u - np.eye(len(u)))))
    if residual > tol:
        raise NotUnitary("|u^dagger u - 1|_max = {:.3g} > {:.3g}"
                         .format(residual, tol))
    return u


def _off_norm(a):
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _jacobi(m, want_vectors):
    """Cyclic complex Jacobi rotations.

    Each rotation J = D R zeroes a[p, q], where D removes the phase of
    a[p, q] and R is the real Jacobi rotation of the resulting real
    symmetric 2x2 block.
    """
    a = np.array(m, dtype=complex)
    a = (a + dagger(a)) / 2
    n = len(a)
    v = np.eye(n, dtype=complex) if want_vectors else None
    scale = float(np.linalg.norm(a))
    if n < 2 or scale == 0.0:
        return a.diagonal().real.copy(), v

    threshold = config.JACOBI_THRESHOLD * scale
    for sweep in range(config.JACOBI_SWEEPS):
        off = _off_norm(a)
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                g = 100.0 * mag
                if (sweep > 3 and abs(app) + g == abs(app)
                        and abs(aqq) + g == abs(aqq)):
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (aqq - app) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) +
                                                 math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ph = (apq / mag).conjugate()
                j = np.array([[c, s], [-s * ph, c * ph]])
                cols = [p, q]
                a[:, cols] = a[:, cols] @ j
                a[cols, :] = dagger(j) @ a[cols, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if v is not None:
                    v[:, cols] = v[:, cols] @ j
    else:
        off = _off_norm(a)
        if off > threshold:
            raise NoConvergence(
                "Jacobi: off-diagonal norm {:.3g} after {} sweeps".format(
                    off, config.JACOBI_SWEEPS))
    log.debug("Jacobi n={} finished after {} sweeps".format(n, sweep))
    return a.diagonal().real.copy(), v


def eig_hermitian(m):
    """All eigenvalues of a Hermitian matrix, descending.

    >>> d = 3
    >>> m = np.diag([2 - 2/d] + [1 - 2/d] * (d * d - 1))
    >>> eig_hermitian(m).multiplicities()
    [(1.333333333333, 1), (0.333333333333, 8)]
    """
    m = check_hermitian(m)
    w, _ = _jacobi(m, want_vectors=False)
    return Spectrum(w)


def eigh_hermitian(m):
    """Eigenvalues (as :class:`Spectrum`) and matching eigenvector columns.

    >>> s, v = eigh_hermitian(np.array([[2, 1j], [-1j, 2]]))
    >>> s
    Spectrum([3.0, 1.0])
    >>> bool(np.allclose(v @ np.diag(s.values) @ dagger(v),
    ...                  [[2, 1j], [-1j, 2]]))
    True
    """
    m = check_hermitian(m)
    w, v = _jacobi(m, want_vectors=True)
    order = np.argsort(-w, kind='stable')
    return Spectrum(w), v[:, order]


def schatten_norm(m, p):
    """Schatten p-norm of a Hermitian matrix from its spectrum."""
    p = Exponent.coerce(p)
    return eig_hermitian(m).norm(p)


def power_from_eigh(spectrum, vecs, power):
    """Rebuild m^power from the output of :func:`eigh_hermitian`; rounding
    negatives clip to 0."""
    w = np.clip(spectrum.values, 0.0, None) ** power
    return (vecs * w) @ dagger(vecs)


def matrix_power_psd(m, power):
    """m^power for positive semidefinite m."""
    return power_from_eigh(*eigh_hermitian(m), power)


def kron(a, b):
    """Kronecker product.

    >>> kron(np.eye(2), np.eye(3)).shape
    (6, 6)
    """
    return np.kron(np.asarray(a), np.asarray(b))


def kron_vec(u, v):
    """Kronecker product of state vectors.

    >>> kron_vec(np.array([1, 0]), np.array([0, 1]))
    array([0, 1, 0, 0])
    """
    u = np.asarray(u)
    v = np.asarray(v)
    if u.ndim != 1 or v.ndim != 1:
        raise DimensionMismatch("kron_vec expects vectors, got {} and {}"
                                .format(u.shape, v.shape))
    return np.kron(u, v)


def partial_trace(m, dims, keep):
    """Trace out the subsystem not in ``keep`` of a bipartite operator.

    The matrix acts on C^d1 (x) C^d2 with the second factor fastest.
    """
    d1, d2 = dims
    m = np.asarray(m)
    if m.shape != (d1 * d2, d1 * d2):
        raise DimensionMismatch("matrix of shape {} does not act on {}x{}"
                                .format(m.shape, d1, d2))
    t = m.reshape(d1, d2, d1, d2)
    if keep == 0:
        return np.einsum('ijkj->ik', t)
    if keep == 1:
        return np.einsum('ijil->jl', t)
    raise DimensionMismatch("keep must be 0 or 1, got {}".format(keep))


def projector(psi):
    psi = np.asarray(psi)
    return np.outer(psi, psi.conj())


def check_pure_state(psi, tol=None):
    tol = config.TOL_NORM if tol is None else tol
    psi = np.asarray(psi)
    if psi.ndim != 1:
        raise DimensionMismatch("state must be a vector, got shape {}"
                                .format(psi.shape))
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1) > tol:
        raise ValueError("state norm {} differs from 1".format(norm))
    return psi


def random_pure_state(dim, rng):
    """Haar-distributed unit vector (normalized complex Gaussian)."""
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def random_unitary(dim, rng):
    """Haar-distributed unitary: QR of a complex Ginibre matrix with the
    phases of diag(R) moved into Q."""
    z = (rng.standard_normal((dim, dim)) +
         1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_density(dim, rng):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def random_hermitian(dim, rng):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + dagger(g)) / 2


if __name__ == "__main__":
    import doctest
    doctest.testmod()
