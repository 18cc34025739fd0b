"""Limiting spectral laws for white-noise sample covariance matrices.

Marcenko-Pastur density, its moments, the second-order fluctuations of the
first two spectral moments, the q-statistic built from them, and the
largest-eigenvalue limits in the spiked covariance model.
"""
from dataclasses import dataclass
from math import comb, isfinite, pi, sqrt

import numpy as np

from .errors import DomainError

BETAS = (1, 2, 4)


def check_beta(beta):
    """Returns ``beta`` as an int, raising ValueError unless it is 1, 2 or 4."""
    if beta not in BETAS:
        raise ValueError('beta must be one of 1, 2, 4; got {0!r}'.format(beta))
    return int(beta)


def _check_positive(name, value):
    if not (isfinite(value) and value > 0):
        raise ValueError('{0} must be a positive finite number; got {1!r}'.format(name, value))


def adaptive_simpson(f, a, b, tol=1e-10, max_depth=50):
    """Integrates ``f`` over ``[a, b]`` with recursive adaptive Simpson.

    Uses the Richardson-corrected estimate on each accepted panel. The
    tolerance is absolute and is split evenly between child panels.
    """
    if b == a:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    stack = [(a, b, fa, fm, fb, whole, tol, max_depth)]
    total = 0.0
    while stack:
        a, b, fa, fm, fb, whole, tol, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
        right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            total += left + right + delta / 15.0
        else:
            stack.append((a, m, fa, flm, fm, left, 0.5 * tol, depth - 1))
            stack.append((m, b, fm, frm, fb, right, 0.5 * tol, depth - 1))
    return total


@dataclass(frozen=True)
class MomentCltParams:
    """Gaussian limit of ``n * ([mean(l), mean(l**2)] - [M1, M2])``.

    ``covariance`` already includes the ``2/beta`` factor.
    """
    mean_vector: np.ndarray
    covariance: np.ndarray
    beta: int


@dataclass(frozen=True)
class MpLaw:
    """Marcenko-Pastur law with noise variance ``noise_var`` and ratio ``ratio = n/m``."""
    noise_var: float
    ratio: float

    def __post_init__(self):
        _check_positive('noise_var', self.noise_var)
        _check_positive('ratio', self.ratio)

    @classmethod
    def from_dims(cls, n, m, noise_var=1.0):
        return cls(noise_var=noise_var, ratio=n / m)

    def support(self):
        """Returns the edges ``(a_minus, a_plus)`` of the continuous part."""
        lam, rc = self.noise_var, sqrt(self.ratio)
        return lam * (1.0 - rc) ** 2, lam * (1.0 + rc) ** 2

    @property
    def atom(self):
        """Point mass at zero, nonzero only when ``ratio > 1``."""
        return max(0.0, 1.0 - 1.0 / self.ratio)

    def pdf(self, x):
        """Continuous part of the density. The atom at zero is excluded.

        Accepts a scalar or an array. Returns 0 at ``x == 0`` even when zero
        lies in the support (``ratio == 1``).
        """
        a, b = self.support()
        x = np.asarray(x, dtype=float)
        inside = (x >= a) & (x <= b) & (x > 0)
        xs = np.where(inside, x, 1.0)
        val = np.sqrt(np.clip((xs - a) * (b - xs), 0.0, None)) / (
            2.0 * pi * self.noise_var * xs * self.ratio)
        out = np.where(inside, val, 0.0)
        return float(out) if out.ndim == 0 else out

    def _cdf_scalar(self, x, tol):
        a, b = self.support()
        if x < 0:
            return 0.0
        if x < a:
            return self.atom
        if x >= b:
            return 1.0
        # x = center + half*cos(phi) turns the square-root edges into a
        # smooth integrand (also at a = 0, where the 1/x pole cancels).
        center, half = 0.5 * (a + b), 0.5 * (b - a)
        scale = half * half / (2.0 * pi * self.noise_var * self.ratio)

        def integrand(phi):
            s = np.sin(phi)
            xx = center + half * np.cos(phi)
            if xx <= 0.0:
                # limit of sin^2(phi) / x at the a = 0 edge
                return scale * 2.0 / half if a == 0.0 else 0.0
            return scale * s * s / xx

        phi_x = np.arccos(np.clip((x - center) / half, -1.0, 1.0))
        return self.atom + adaptive_simpson(integrand, phi_x, pi, tol=tol)

    def cdf(self, x, tol=1e-10):
        """Cumulative distribution function, atom included.

        The continuous part is integrated with adaptive Simpson quadrature at
        absolute tolerance ``tol``.
        """
        arr = np.asarray(x, dtype=float)
        if arr.ndim == 0:
            return self._cdf_scalar(float(arr), tol)
        return np.array([self._cdf_scalar(float(v), tol) for v in arr.ravel()]).reshape(arr.shape)

    def moment(self, k):
        """k-th moment ``E[x**k]``; ``k == 0`` gives the total mass 1."""
        if k < 0 or int(k) != k:
            raise ValueError('moment order must be a nonnegative integer; got {0!r}'.format(k))
        k = int(k)
        if k == 0:
            return 1.0
        c = self.ratio
        total = sum(c ** j * comb(k, j) * comb(k - 1, j) / (j + 1) for j in range(k))
        return self.noise_var ** k * total

    def clt_params(self, beta):
        """Fluctuations of the first two sample moments about ``[M1, M2]``."""
        beta = check_beta(beta)
        lam, c = self.noise_var, self.ratio
        mean = np.array([0.0, (2.0 / beta - 1.0) * lam ** 2 * c])
        q = np.array([
            [lam ** 2 * c, 2.0 * lam ** 3 * c * (c + 1.0)],
            [2.0 * lam ** 3 * c * (c + 1.0), 2.0 * lam ** 4 * c * (2.0 * c * c + 5.0 * c + 2.0)],
        ])
        return MomentCltParams(mean_vector=mean, covariance=(2.0 / beta) * q, beta=beta)


def q_statistic(eigs):
    """Ratio of the mean squared eigenvalue to the squared mean eigenvalue.

    Scale invariant; equals 1 exactly when all eigenvalues coincide.
    """
    l = np.asarray(eigs, dtype=float)
    if l.ndim != 1 or l.size < 2:
        raise ValueError('q statistic needs at least two eigenvalues')
    if np.any(l < 0):
        raise ValueError('eigenvalues must be nonnegative')
    s1 = l.sum()
    if s1 <= 0:
        raise DomainError('degenerate spectrum: all eigenvalues are zero')
    return float(l.size * np.dot(l, l) / (s1 * s1))


def q_clt_params(c, beta):
    """Returns ``(center, mean_shift, variance)`` for ``n * (q - center)``.

    ``n * (q - center)`` is asymptotically normal with mean ``mean_shift`` and
    variance ``variance``.
    """
    _check_positive('c', c)
    beta = check_beta(beta)
    return 1.0 + c, (2.0 / beta - 1.0) * c, (4.0 / beta) * c * c


def phase_transition(law):
    """Population eigenvalue above which a spike separates from the bulk."""
    return law.noise_var * (1.0 + sqrt(law.ratio))


def spike_limit(lambda_j, law):
    """Almost-sure limit of the sample eigenvalue paired with ``lambda_j``.

    Below (or at) the phase transition the limit is the bulk edge.
    """
    _check_positive('lambda_j', lambda_j)
    lam, c = law.noise_var, law.ratio
    if lambda_j > phase_transition(law):
        return lambda_j * (1.0 + lam * c / (lambda_j - lam))
    return law.support()[1]


def spike_fluctuation_std(lambda_j, law, beta, n):
    """Standard deviation of a separated sample eigenvalue at dimension ``n``.

    The variance factor ``1 - c / (lambda_j - lambda)**2`` is used as is; it
    is only dimensionally consistent for unit noise variance.

    Raises:
        DomainError: if ``lambda_j`` does not strictly exceed the phase
            transition, or the variance factor is not positive.
    """
    beta = check_beta(beta)
    if n < 1:
        raise ValueError('n must be a positive integer')
    lam, c = law.noise_var, law.ratio
    factor = 1.0 - c / (lambda_j - lam) ** 2 if lambda_j != lam else -1.0
    if not lambda_j > phase_transition(law) or factor <= 0:
        raise DomainError('below phase transition; fluctuation formula inapplicable')
    return sqrt(2.0 / (beta * n) * lambda_j ** 2 * factor)
