"""Identifiability limits of eigenvalue-only detection.

A population signal eigenvalue is asymptotically visible in the sample
spectrum only if it exceeds ``noise_var * (1 + sqrt(n/m))``. The count of
such eigenvalues is the effective number of signals.
"""
from dataclasses import dataclass
from math import sqrt

import numpy as np

from .errors import DomainError
from .rmt import check_beta


def detection_threshold(noise_var, n, m):
    """Population eigenvalue level ``noise_var * (1 + sqrt(n/m))``."""
    if n < 1 or m < 1:
        raise ValueError('n and m must be positive integers')
    return noise_var * (1.0 + sqrt(n / m))


def effective_count(eigs, noise_var, n, m):
    """Number of values in ``eigs`` strictly above the detection threshold."""
    thr = detection_threshold(noise_var, n, m)
    return int(np.count_nonzero(np.asarray(eigs, dtype=float) > thr))


def k_eff(model, n, m):
    """Effective number of identifiable signals of a PopulationModel at ``(n, m)``."""
    return effective_count(model.signal_eigs, model.noise_var, n, m)


@dataclass(frozen=True)
class TwoSourceGeometry:
    """Two uncorrelated sources with manifold vectors seen through their Gram entries.

    Args:
        power1, power2: Source powers.
        norm1_sq, norm2_sq: Squared norms of the two manifold vectors.
        inner_abs_sq: Squared modulus of their inner product.
        noise_var: Noise variance.
    """
    power1: float
    power2: float
    norm1_sq: float
    norm2_sq: float
    inner_abs_sq: float
    noise_var: float

    def __post_init__(self):
        for name in ('power1', 'power2', 'norm1_sq', 'norm2_sq', 'noise_var'):
            if not getattr(self, name) > 0:
                raise ValueError('{0} must be positive'.format(name))
        if self.inner_abs_sq < 0:
            raise ValueError('inner_abs_sq must be nonnegative')
        bound = self.norm1_sq * self.norm2_sq
        if self.inner_abs_sq > bound * (1.0 + 1e-12):
            raise ValueError('Cauchy-Schwarz violated: |<v1,v2>|^2 = {0} > {1}'.format(
                self.inner_abs_sq, bound))


def two_source_eigs(geom):
    """The two largest population eigenvalues ``(lambda1, lambda2)``."""
    p1 = geom.power1 * geom.norm1_sq
    p2 = geom.power2 * geom.norm2_sq
    inner = min(geom.inner_abs_sq, geom.norm1_sq * geom.norm2_sq)
    half_sum = 0.5 * (p1 + p2)
    half_gap = 0.5 * sqrt((p1 - p2) ** 2 + 4.0 * geom.power1 * geom.power2 * inner)
    return geom.noise_var + half_sum + half_gap, geom.noise_var + half_sum - half_gap


def two_source_keff(geom, n, m):
    """Effective number of signals (0, 1 or 2) for the two-source covariance."""
    lam1, lam2 = two_source_eigs(geom)
    thr = detection_threshold(geom.noise_var, n, m)
    if thr < lam2:
        return 2
    if thr < lam1:
        return 1
    return 0


def identifiability_condition(power, norm_sq, inner_abs, noise_var, n, m):
    """Closed-form test for joint identifiability of two equal-power, equal-norm sources.

    Evaluates ``power * norm_sq * (1 - inner_abs / sqrt(norm_sq)) > noise_var * sqrt(n/m)``
    literally. For decisions prefer two_source_keff, which uses the exact
    eigenvalues.
    """
    lhs = power * norm_sq * (1.0 - inner_abs / sqrt(norm_sq))
    return bool(lhs > noise_var * sqrt(n / m))


def z_sep(lambda_j, noise_var, n, m, beta):
    """Predicted gap between a signal eigenvalue and the noise bulk edge.

    The gap is measured in standard deviations of the signal eigenvalue's
    fluctuations.

    Raises:
        DomainError: if ``lambda_j`` does not strictly exceed the detection
            threshold or the fluctuation variance is not positive.
    """
    beta = check_beta(beta)
    c = n / m
    var_factor = 1.0 - c / (lambda_j - noise_var) ** 2 if lambda_j != noise_var else -1.0
    if not lambda_j > detection_threshold(noise_var, n, m) or var_factor <= 0:
        raise DomainError('Z_sep undefined below phase transition')
    signal = lambda_j * (1.0 + noise_var * c / (lambda_j - noise_var))
    edge = noise_var * (1.0 + sqrt(c)) ** 2
    return (signal - edge) / sqrt(2.0 / (beta * n) * lambda_j ** 2 * var_factor)
