"""Residual checks for the structural claims about a channel."""

import logging

import numpy as np

from channel_purity import config
from channel_purity.channels import apply, choi, cp_residual, tp_residual
from channel_purity.channels.werner_holevo import wh_linear
from channel_purity.linalg import (check_square, check_unitary, dagger,
                                   partial_trace, random_density,
                                   random_unitary)
from channel_purity.utils import DimensionMismatch

log = logging.getLogger(__name__)


def verify_covariance(ch, u, rho):
    """|| S(U rho U^dagger) - conj(U) S(rho) U^T ||_F.

    >>> from channel_purity.channels.werner_holevo import wh_channel
    >>> verify_covariance(wh_channel(3), np.eye(3), np.eye(3) / 3)
    0.0
    """
    u = check_unitary(u)
    lhs = apply(ch, u @ rho @ dagger(u))
    ubar = u.conj()
    rhs = ubar @ apply(ch, rho) @ u.T
    return float(np.linalg.norm(lhs - rhs))


def verify_hs_hermitian(ch, a, b):
    """| tr(a^dagger S(b)) - tr(S(a)^dagger b) |."""
    a = check_square(a)
    b = check_square(b)
    if a.shape != (ch.dim_in, ch.dim_in) or b.shape != a.shape:
        raise DimensionMismatch("need {0}x{0} matrices, got {1} and {2}"
                                .format(ch.dim_in, a.shape, b.shape))
    lhs = np.trace(dagger(a) @ apply(ch, b))
    rhs = np.trace(dagger(apply(ch, a)) @ b)
    return float(abs(lhs - rhs))


def linear_form_residual(ch, rho):
    """Kraus form against 1/(d-1)(tr(rho) 1 - rho^T), Frobenius norm."""
    return float(np.linalg.norm(apply(ch, rho) - wh_linear(rho)))


def choi_tp_residual(ch):
    """|| tr_out Choi - 1 ||_F."""
    reduced = partial_trace(choi(ch), (ch.dim_in, ch.dim_out), keep=0)
    return float(np.linalg.norm(reduced - np.eye(ch.dim_in)))


class CheckResult:
    """Worst value of one check over all trials.

    Args:
        name (str): Check name.
        value (float): Worst residual (or, for ``cp``, the smallest Choi
            eigenvalue).
        tolerance (float): Pass threshold.
        lower (bool): ``True`` when the value must stay above
            ``-tolerance`` instead of below ``tolerance``.
    """
    def __init__(self, name, value, tolerance, lower=False):
        self.name = name
        self.value = value
        self.tolerance = tolerance
        self.lower = lower

    @property
    def passed(self):
        if self.lower:
            return self.value >= -self.tolerance
        return self.value <= self.tolerance

    def __repr__(self):
        return "CheckResult({}, {:.3g}, {})".format(
            self.name, self.value, "pass" if self.passed else "FAIL")


class VerificationReport:
    def __init__(self, checks, trials):
        self.checks = checks
        self.trials = trials

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def verify_channel(ch, trials, rng, werner_holevo=False, tol=None):
    """Run the residual checks on ``trials`` random instances.

    Trace preservation and complete positivity are checked for any channel.
    With ``werner_holevo`` set, the Kraus-vs-linear-form equality, unitary
    covariance and Hilbert-Schmidt hermiticity are checked as well.
    """
    tol = config.TOL_TP if tol is None else tol
    checks = [
        CheckResult("tp", tp_residual(ch), tol),
        CheckResult("choi_tp", choi_tp_residual(ch), tol),
        CheckResult("cp", cp_residual(ch), tol, lower=True),
    ]
    if werner_holevo:
        d = ch.dim_in
        linear = covariance = hermitian = 0.0
        for _ in range(trials):
            rho = random_density(d, rng)
            linear = max(linear, linear_form_residual(ch, rho))
            u = random_unitary(d, rng)
            covariance = max(covariance, verify_covariance(ch, u, rho))
            a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            hermitian = max(hermitian, verify_hs_hermitian(ch, a, b))
        checks += [
            CheckResult("linear_form", linear, tol),
            CheckResult("covariance", covariance, tol),
            CheckResult("hs_hermitian", hermitian, tol),
        ]
    for c in checks:
        log.info("check {}: {:.3g} ({})".format(
            c.name, c.value, "pass" if c.passed else "FAIL"))
    return VerificationReport(checks, trials)


if __name__ == "__main__":
    import doctest
    doctest.testmod()
