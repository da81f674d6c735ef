"""
Maximal output purity nu_p and the multiplicativity gap Delta.

For the Werner-Holevo channel S on d x d matrices every pure input gives
the same output spectrum, so nu_p(S) = (d-1)^-(1-1/p). For S (x) S the
output at a Schmidt-diagonal input sum_a c_a |aa> is

    1/(d-1)^2 (1 - 1 (x) rho - rho (x) 1 + |Phi><Phi|),   rho = diag(c_a^2),

and Delta(p, Phi) = log ||S (x) S(|Phi><Phi|)||_p - 2 log nu_p(S) measures
how far that input beats the best product input.

  >>> abs(delta_max_entangled('inf') - math.log(4 / 3)) < 1e-12
  True
  >>> 4.7822 <= find_p0(1e-6) <= 4.7824
  True
"""

import logging
import math

import numpy as np

from channel_purity import config
from channel_purity.channels import apply, apply_adjoint
from channel_purity.config import get_optimizer_config
from channel_purity.linalg import (Exponent, Spectrum, check_pure_state,
                                   dagger, eig_hermitian, eigh_hermitian,
                                   power_from_eigh, projector,
                                   random_pure_state)
from channel_purity.utils import (BracketFailure, DimensionMismatch,
                                  InvalidDimension, NoConvergence)

log = logging.getLogger(__name__)

P0_BRACKET = (2.0, 10.0)
MAX_BISECTIONS = 200


class SchmidtVector:
    """Schmidt coefficients c_a >= 0, sum c_a^2 = 1, stored descending.

    >>> SchmidtVector.from_squares([0.2, 0.5, 0.3]).squares.round(12)
    array([0.5, 0.3, 0.2])
    >>> SchmidtVector([0.6, 0.6])
    Traceback (most recent call last):
    ...
    ValueError: sum c^2 = 0.72, expected 1
    """
    def __init__(self, coeffs, tol=1e-12):
        c = np.asarray(coeffs, dtype=float).ravel()
        if c.size < 1 or np.any(c < 0):
            raise ValueError("Schmidt coefficients must be nonnegative")
        total = float(np.sum(c * c))
        if abs(total - 1) > tol:
            raise ValueError("sum c^2 = {:.12g}, expected 1".format(total))
        c = np.sort(c)[::-1].copy()
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def maximally_entangled(cls, d):
        return cls(np.full(d, 1 / math.sqrt(d)))

    @classmethod
    def product(cls, d):
        c = np.zeros(d)
        c[0] = 1
        return cls(c)

    @classmethod
    def from_squares(cls, squares):
        return cls(np.sqrt(np.clip(np.asarray(squares, dtype=float), 0, None)))

    @property
    def d(self):
        return len(self.coeffs)

    @property
    def squares(self):
        return self.coeffs ** 2

    def state(self):
        """sum_a c_a |aa> in C^d (x) C^d."""
        d = self.d
        phi = np.zeros(d * d)
        phi[np.arange(d) * (d + 1)] = self.coeffs
        return phi

    def reduced(self):
        return np.diag(self.squares)

    def __repr__(self):
        return "SchmidtVector({})".format(
            [round(float(x), 12) for x in self.coeffs])


class PurityReport:
    """Result of :func:`nu_p_numeric`.

    Args:
        p (Exponent): Exponent used.
        value (float): Best ``||S(|phi><phi|)||_p`` found, a lower bound on
            nu_p.
        maximizer: Input vector achieving ``value``.
        restarts_used (int): Number of restarts run.
        converged (bool): Whether the best restart met the stopping rule
            within its iteration budget.
        values (list): Final value of every restart, in seed order.
    """
    def __init__(self, p, value, maximizer, restarts_used, converged,
                 values):
        self.p = p
        self.value = value
        self.maximizer = maximizer
        self.restarts_used = restarts_used
        self.converged = converged
        self.values = values

    def fraction_within(self, target, tol):
        hits = sum(1 for v in self.values if abs(v - target) <= tol)
        return hits / len(self.values)

    def __repr__(self):
        return ("PurityReport(p={}, value={:.12g}, restarts={}, "
                "converged={})".format(self.p, self.value,
                                       self.restarts_used, self.converged))


def nu_p_wh_analytic(d, p):
    """(d-1)^-(1-1/p); 1/(d-1) at p = inf.

    >>> '{:.10f}'.format(nu_p_wh_analytic(3, 2))
    '0.7071067812'
    >>> nu_p_wh_analytic(3, 'inf')
    0.5
    """
    p = Exponent.coerce(p)
    d = int(d)
    if d < 3:
        raise InvalidDimension("need d >= 3, got {}".format(d))
    if p.is_infinite:
        return 1 / (d - 1)
    return (d - 1) ** -(1 - 1 / p.value)


def ss_output_matrix(c):
    """Dense S (x) S output at the Schmidt-diagonal input of ``c``."""
    d = c.d
    rho = c.reduced()
    phi = c.state()
    one = np.eye(d)
    m = (np.eye(d * d) - np.kron(one, rho) - np.kron(rho, one) +
         np.outer(phi, phi))
    return m / (d - 1) ** 2


def ss_output_spectrum(c):
    """Spectrum of :func:`ss_output_matrix` without forming it.

    Off span{|aa>} the bracket is diagonal with entries 1 - c_a^2 - c_b^2
    (a != b); on that span it is diag(1 - 2 c_a^2) + c c^T.

    >>> ss_output_spectrum(SchmidtVector.maximally_entangled(3))\
.multiplicities()
    [(0.333333333333, 1), (0.083333333333, 8)]
    >>> ss_output_spectrum(SchmidtVector.product(3)).multiplicities()
    [(0.25, 4), (0.0, 5)]
    """
    d = c.d
    c2 = c.squares
    block = np.diag(1 - 2 * c2) + np.outer(c.coeffs, c.coeffs)
    inner = eig_hermitian(block).values
    outer = [1 - c2[a] - c2[b] for a in range(d) for b in range(d) if a != b]
    return Spectrum(np.concatenate([inner, outer]) / (d - 1) ** 2)


def delta(p, c):
    """log ||S (x) S(|Phi><Phi|)||_p - 2 log nu_p(S), natural log.

    >>> '{:.4f}'.format(delta(2, SchmidtVector.maximally_entangled(3)))
    '-0.2027'
    >>> abs(delta(5, SchmidtVector.product(3))) < 1e-10
    True
    """
    p = Exponent.coerce(p)
    norm = ss_output_spectrum(c).norm(p)
    return math.log(norm) - 2 * math.log(nu_p_wh_analytic(c.d, p))


def delta_max_entangled(p, d=3):
    """Delta at the maximally entangled input.

    For d = 3 this is log(4/3) + (1/p) log(1/4 + 2^(1-2p)). Other d use the
    same spectrum (one eigenvalue 2-2/d, d^2-1 eigenvalues 1-2/d, scaled by
    1/(d-1)^2).

    >>> '{:.10f}'.format(delta_max_entangled(2))
    '-0.2027325541'
    """
    p = Exponent.coerce(p)
    d = int(d)
    if d < 3:
        raise InvalidDimension("need d >= 3, got {}".format(d))
    if d == 3:
        if p.is_infinite:
            return math.log(4 / 3)
        return math.log(4 / 3) + math.log(0.25 + 2 ** (1 - 2 * p.value)) / \
            p.value
    top = (2 - 2 / d) / (d - 1) ** 2
    if p.is_infinite:
        return math.log(top) + 2 * math.log(d - 1)
    ratio = (d - 2) / (2 * (d - 1))
    q = p.value
    return (math.log(top) + math.log1p((d * d - 1) * ratio ** q) / q +
            2 * (1 - 1 / q) * math.log(d - 1))


def find_p0(tol, d=3, bracket=P0_BRACKET, strict=True):
    """Bisection for the zero of :func:`delta_max_entangled`.

    Stops once the bracket is no wider than ``tol`` and the gap at its
    midpoint is within ``tol`` of zero. When the bracket collapses to
    adjacent floats first, raises NoConvergence if ``strict``, otherwise
    logs a warning and returns the midpoint.
    """
    if not tol > 0:
        raise ValueError("tol must be > 0, got {}".format(tol))
    lo, hi = bracket
    f_lo = delta_max_entangled(lo, d)
    f_hi = delta_max_entangled(hi, d)
    if not f_lo < 0 < f_hi:
        raise BracketFailure(
            "Delta({}) = {:.6g}, Delta({}) = {:.6g}: no sign change".format(
                lo, f_lo, hi, f_hi))
    for i in range(MAX_BISECTIONS):
        mid = (lo + hi) / 2
        f_mid = delta_max_entangled(mid, d)
        if hi - lo <= tol and abs(f_mid) <= tol:
            log.info("p0 = {:.12g} after {} bisections".format(mid, i))
            return mid
        if mid in (lo, hi):
            break
        if f_mid < 0:
            lo = mid
        else:
            hi = mid
    if strict:
        raise NoConvergence("bisection stalled at [{!r}, {!r}]".format(
            lo, hi))
    log.warning("p0: bisection stalled at [{!r}, {!r}] before reaching "
                "tol {}".format(lo, hi, tol))
    return (lo + hi) / 2


def delta_sweep(p_min, p_max, steps, d=3):
    """Rows (p, Delta(p, Phi_m)) on ``steps`` equally spaced exponents."""
    if steps < 1:
        raise ValueError("steps must be >= 1, got {}".format(steps))
    Exponent.coerce(p_min)
    if not p_max >= p_min:
        raise ValueError("empty range [{}, {}]".format(p_min, p_max))
    return [(float(p), delta_max_entangled(float(p), d))
            for p in np.linspace(p_min, p_max, steps)]


def sign_changes(rows):
    """Consecutive (p_a, p_b) pairs whose gaps differ in sign.

    >>> sign_changes([(1.0, -1.0), (2.0, -0.5), (3.0, 0.5)])
    [(2.0, 3.0)]
    """
    return [(a[0], b[0]) for a, b in zip(rows, rows[1:])
            if (a[1] < 0) != (b[1] < 0)]


class ScanResult:
    """Delta over the Schmidt simplex of d = 3.

    ``points`` holds the integer grid coordinates (i, j, k), i + j + k =
    grid_n, of each row; ``rows`` holds (c1^2, c2^2, Delta).
    """
    def __init__(self, p, grid_n, points, rows, argmax):
        self.p = p
        self.grid_n = grid_n
        self.points = points
        self.rows = rows
        self.argmax = argmax

    @property
    def best(self):
        return self.rows[self.argmax]

    def kind(self):
        """'corner', 'center', 'edge' or 'interior' for the argmax."""
        i, j, k = self.points[self.argmax]
        nonzero = sum(1 for x in (i, j, k) if x)
        if nonzero == 1:
            return 'corner'
        if i == j == k:
            return 'center'
        if nonzero == 2:
            return 'edge'
        return 'interior'


def schmidt_scan(p, grid_n):
    """Delta(p, Phi) on the grid c1^2 = i/n, c2^2 = j/n, c3^2 = 1 - c1^2 -
    c2^2. Ties for the maximum go to the lowest grid index.

    >>> scan = schmidt_scan(5, 6)
    >>> scan.kind(), len(scan.rows)
    ('center', 28)
    """
    p = Exponent.coerce(p)
    if grid_n < 1:
        raise ValueError("grid_n must be >= 1, got {}".format(grid_n))
    points = []
    rows = []
    argmax = 0
    for i in range(grid_n + 1):
        for j in range(grid_n + 1 - i):
            k = grid_n - i - j
            squares = (i / grid_n, j / grid_n, k / grid_n)
            value = delta(p, SchmidtVector.from_squares(squares))
            points.append((i, j, k))
            rows.append((squares[0], squares[1], value))
            if value > rows[argmax][2]:
                argmax = len(rows) - 1
    result = ScanResult(p, grid_n, points, rows, argmax)
    log.info("schmidt scan p={} n={}: max {:.6g} at {} ({})".format(
        p, grid_n, result.best[2], points[argmax], result.kind()))
    return result


def schmidt_profile(phi, dims):
    """Schmidt coefficients of a bipartite vector, descending."""
    d1, d2 = dims
    phi = np.asarray(phi)
    if phi.size != d1 * d2:
        raise DimensionMismatch("vector of size {} is not {}x{}".format(
            phi.size, d1, d2))
    m = phi.reshape(d1, d2)
    spectrum = eig_hermitian(m @ dagger(m))
    return np.sqrt(np.clip(spectrum.values, 0, None))


def _value_and_ascent_operator(ch, phi, p):
    """Output p-norm at |phi> and the PSD operator G whose Rayleigh quotient
    lower-bounds the objective: S*(sigma^(p-1)) for finite p and
    S*(|chi><chi|), chi a top eigenvector of sigma, for p = inf."""
    sigma = apply(ch, projector(phi))
    spectrum, vecs = eigh_hermitian(sigma)
    value = spectrum.norm(p)
    if p.is_infinite:
        weight = projector(vecs[:, 0])
    else:
        weight = power_from_eigh(spectrum, vecs, p.value - 1)
    return value, apply_adjoint(ch, weight)


def _ascend(ch, phi, p, max_iter, tol):
    """Power steps phi <- G phi / |G phi|.

    The objective is convex in |phi><phi| and G is its (sub)gradient, so
    the Rayleigh quotient of G never drops along a power step and neither
    does the objective.
    """
    value, g = _value_and_ascent_operator(ch, phi, p)
    for it in range(max_iter):
        nxt = g @ phi
        norm = np.linalg.norm(nxt)
        if norm == 0:
            return value, phi, True, it
        nxt = nxt / norm
        new_value, new_g = _value_and_ascent_operator(ch, nxt, p)
        if new_value < value:
            # rounding only
            return value, phi, True, it
        improved = new_value - value
        phi, value, g = nxt, new_value, new_g
        if improved < tol:
            return value, phi, True, it + 1
    return value, phi, False, max_iter


def nu_p_numeric(ch, p, cfg=None, seed=None):
    """Multistart ascent for sup ||S(|phi><phi|)||_p over unit vectors.

    Each restart starts from a Haar-random vector drawn from its own seed,
    derived from ``seed`` with :class:`numpy.random.SeedSequence`, so the
    result does not depend on the order restarts are run in.

    >>> from channel_purity.channels.werner_holevo import wh_channel
    >>> r = nu_p_numeric(wh_channel(3), 2, get_optimizer_config(restarts=5))
    >>> '{:.6f}'.format(r.value), r.restarts_used
    ('0.707107', 5)
    """
    p = Exponent.coerce(p)
    cfg = get_optimizer_config(cfg)
    restarts = cfg.restarts or config.RESTARTS
    tol = cfg.tol or config.TOL_OPT
    seed = config.SEED if seed is None else seed

    best = None
    values = []
    for r, ss in enumerate(np.random.SeedSequence(seed).spawn(restarts)):
        rng = np.random.default_rng(ss)
        phi = random_pure_state(ch.dim_in, rng)
        value, phi, converged, iters = _ascend(ch, phi, p, cfg.max_iter, tol)
        log.debug("restart {}: value {:.12g} after {} iterations{}".format(
            r, value, iters, "" if converged else " (budget exhausted)"))
        values.append(value)
        if best is None or value > best[0]:
            best = (value, phi, converged)

    value, phi, converged = best
    check_pure_state(phi)
    if not converged:
        log.warning("nu_p: best restart did not converge in {} iterations"
                    .format(cfg.max_iter))
    log.info("nu_{}: {:.12g} over {} restarts".format(p, value, restarts))
    return PurityReport(p, value, phi, restarts, converged, values)


if __name__ == "__main__":
    import doctest
    doctest.testmod()
