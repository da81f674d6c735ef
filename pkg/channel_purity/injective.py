"""
Injective norm mu_N(Phi) = sup |<Phi, phi_1 (x) ... (x) phi_N>| over unit
vectors phi_a, found by alternating rank-one maximization.

With all factors but phi_a fixed the overlap is linear in phi_a, so the best
phi_a is the contraction of Phi against the conjugates of the other
factors, normalized. Sweeping the factors cyclically never lowers the
overlap.

  >>> fit = mu(antisymmetric_vector(3), get_optimizer_config(restarts=20))
  >>> '{:.7f}'.format(fit.value)
  '0.4082483'
"""

import collections
import itertools
import logging
import math

import numpy as np

from channel_purity import config
from channel_purity.channels import TensorVector, channel_to_vector
from channel_purity.config import get_optimizer_config
from channel_purity.linalg import kron_vec, random_pure_state
from channel_purity.utils import InvalidDimension, ShapeMismatch

log = logging.getLogger(__name__)

MuMultiplicativity = collections.namedtuple(
    'MuMultiplicativity', ['mu_vw', 'mu_v', 'mu_w', 'ratio'])


class RankOneFit:
    """Best product overlap found by :func:`mu`.

    Args:
        value (float): |<Phi, phi_1 (x) ... (x) phi_N>| for ``factors``.
        factors (list): One unit vector per tensor factor.
        restarts_used (int): Starts run, warm starts included.
        converged (bool): Whether the best start met the stopping rule.
    """
    def __init__(self, value, factors, restarts_used, converged):
        self.value = value
        self.factors = factors
        self.restarts_used = restarts_used
        self.converged = converged

    def __repr__(self):
        return "RankOneFit(value={:.12g}, N={}, restarts={}, " \
            "converged={})".format(self.value, len(self.factors),
                                   self.restarts_used, self.converged)


def restart_budget(dims):
    """max(MU_MIN_RESTARTS, 10 * prod(dims)), capped at MU_MAX_RESTARTS.

    >>> restart_budget((3, 3, 3)), restart_budget((2, 2)), \
restart_budget((9, 9, 9))
    (270, 100, 2000)
    """
    return min(config.MU_MAX_RESTARTS,
               max(config.MU_MIN_RESTARTS, 10 * math.prod(dims)))


def contract_except(amps, factors, skip):
    """Contract every axis but ``skip`` against the conjugated factor."""
    t = amps
    # Highest axis first so the remaining axis numbers stay valid
    for b in reversed(range(len(factors))):
        if b != skip:
            t = np.tensordot(t, factors[b].conj(), axes=([b], [0]))
    return t


def overlap(v, factors):
    """<v, phi_1 (x) ... (x) phi_N>, antilinear in v."""
    t = v.amplitudes.conj()
    for b in reversed(range(v.N)):
        t = np.tensordot(t, factors[b], axes=([b], [0]))
    return complex(t)


def _sweep_from(v, factors, max_iter, tol):
    factors = [np.array(f, dtype=complex) for f in factors]
    value = abs(overlap(v, factors))
    slack = 1e-12 * max(1.0, v.norm())
    for it in range(max_iter):
        start = value
        for a in range(v.N):
            h = contract_except(v.amplitudes, factors, a)
            norm = float(np.linalg.norm(h))
            if norm == 0.0:
                continue
            factors[a] = h / norm
            assert norm >= value - slack, \
                "alternating sweep lowered the overlap: {} -> {}".format(
                    value, norm)
            value = norm
        if value - start < tol:
            return value, factors, True, it + 1
    return value, factors, False, max_iter


def mu(v, cfg=None, seed=None, warm_starts=()):
    """Multistart alternating maximization for mu_N(v).

    Warm starts (lists of factor vectors) run before the random starts.
    Random starts are Haar-random tuples drawn from per-start seeds derived
    from ``seed``. Among equal values the earliest start wins.

    >>> v = TensorVector([2, 3, 2], np.eye(2)[0][:, None, None] *
    ...                  np.eye(3)[1][None, :, None] *
    ...                  np.eye(2)[0][None, None, :])
    >>> fit = mu(v, get_optimizer_config(restarts=3))
    >>> round(fit.value, 12), fit.restarts_used
    (1.0, 3)
    """
    if v.N < 2:
        raise ShapeMismatch("mu needs N >= 2 factors, got {}".format(v.N))
    cfg = get_optimizer_config(cfg)
    restarts = cfg.restarts or restart_budget(v.dims)
    tol = cfg.tol or config.TOL_ALS
    seed = config.SEED if seed is None else seed

    starts = []
    for factors in warm_starts:
        if [len(f) for f in factors] != list(v.dims):
            raise ShapeMismatch("warm start dims {} for a vector with dims {}"
                                .format([len(f) for f in factors], v.dims))
        starts.append(factors)
    for ss in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(ss)
        starts.append([random_pure_state(d, rng) for d in v.dims])

    best = None
    for r, factors in enumerate(starts):
        value, factors, converged, sweeps = _sweep_from(v, factors,
                                                        cfg.max_iter, tol)
        log.debug("start {}: overlap {:.12g} after {} sweeps".format(
            r, value, sweeps))
        if best is None or value > best[0]:
            best = (value, factors, converged)

    value, factors, converged = best
    if not converged:
        log.warning("mu: best start did not converge in {} sweeps".format(
            cfg.max_iter))
    log.info("mu_{} of dims {}: {:.12g} over {} starts".format(
        v.N, list(v.dims), value, len(starts)))
    return RankOneFit(value, factors, len(starts), converged)


def mu_of_channel(ch, cfg=None, seed=None):
    """nu_inf(ch) as mu_3 of its Kraus family, squared.

    >>> from channel_purity.channels import identity_channel
    >>> round(mu_of_channel(identity_channel(2),
    ...                     get_optimizer_config(restarts=3)), 12)
    1.0
    """
    return mu(channel_to_vector(ch), cfg, seed).value ** 2


def _permutation_sign(perm):
    inversions = sum(1 for i, j in itertools.combinations(range(len(perm)), 2)
                     if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


def antisymmetric_vector(d=3):
    """The normalized totally antisymmetric vector of C^3 (x) C^3 (x) C^3.

    >>> v = antisymmetric_vector()
    >>> round(float(v.amplitudes[0, 1, 2].real) * math.sqrt(6), 12)
    1.0
    >>> round(float(v.amplitudes[1, 0, 2].real) * math.sqrt(6), 12)
    -1.0
    >>> complex(v.amplitudes[0, 0, 1])
    0j
    """
    if d != 3:
        raise InvalidDimension(
            "the antisymmetric vector needs N = d = 3, got d = {}".format(d))
    amps = np.zeros((d,) * d)
    for perm in itertools.permutations(range(d)):
        amps[perm] = _permutation_sign(perm)
    return TensorVector((d,) * d, amps / math.sqrt(math.factorial(d)))


def maximally_entangled_factors(dims_v, dims_w):
    """Per regrouped factor sum_i |ii> / sqrt(d), or None if some factor
    pair differs in dimension."""
    if list(dims_v) != list(dims_w):
        return None
    return [np.eye(d).ravel() / math.sqrt(d) for d in dims_v]


def check_mu_multiplicativity(v, w, cfg=None, seed=None):
    """mu of v (x) w (factor a regrouped as H_a (x) K_a) against mu(v) mu(w).

    The product fit is additionally started from the tensor product of the
    optimal factors of v and w, and from maximally entangled factors when
    every factor pair has equal dimension.
    """
    vw = v.tensor(w)
    fit_v = mu(v, cfg, seed)
    fit_w = mu(w, cfg, seed)
    if fit_v.value == 0.0 or fit_w.value == 0.0:
        raise ValueError("mu of a zero vector")

    warm = [[kron_vec(a, b) for a, b in zip(fit_v.factors, fit_w.factors)]]
    entangled = maximally_entangled_factors(v.dims, w.dims)
    if entangled is not None:
        warm.append(entangled)
    fit_vw = mu(vw, cfg, seed, warm_starts=warm)

    ratio = fit_vw.value / (fit_v.value * fit_w.value)
    log.info("mu(v x w) / mu(v) mu(w) = {:.12g}".format(ratio))
    return MuMultiplicativity(fit_vw.value, fit_v.value, fit_w.value, ratio)


if __name__ == "__main__":
    import doctest
    doctest.testmod()
