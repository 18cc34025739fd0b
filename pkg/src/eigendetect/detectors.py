"""Model-order estimators operating on sample covariance eigenvalues.

Each detector evaluates a penalized criterion for every candidate number of
signals ``k`` and returns the smallest ``k`` attaining the minimum finite
score, together with the full score vector.

* ``new``: moment-based criterion built on the q-statistic fluctuations,
  usable for ``m < n``.
* ``new_wideband``: the same criterion summed over independent frequency bins.
* ``aic_wk`` / ``mdl_wk``: Wax-Kailath AIC and MDL, defined for ``m > n``.
* ``mdl_modified``: MDL with ``k`` restricted to ``[0, min(n, m))``.
"""
from dataclasses import dataclass
from math import inf, isfinite, log

import numpy as np

from .errors import DomainError

METHODS = ('new', 'new_wideband', 'aic_wk', 'mdl_wk', 'mdl_modified')


@dataclass(frozen=True)
class DetectionResult:
    """Estimated number of signals and the criterion value for every ``k``.

    ``scores`` is a tuple of ``(k, score)`` pairs; infeasible ``k`` score
    ``inf``.
    """
    k_hat: int
    scores: tuple
    method: str

    def score_of(self, k):
        return dict(self.scores)[k]

    def to_dict(self):
        """JSON-ready form; infinite scores become ``None``."""
        return {
            'method': self.method,
            'k_hat': self.k_hat,
            'scores': [{'k': k, 'score': s if isfinite(s) else None} for k, s in self.scores],
        }


def _result(scores, method):
    vals = np.array([s for _, s in scores], dtype=float)
    vals[np.isnan(vals)] = inf
    if not np.any(np.isfinite(vals)):
        raise DomainError('unusable spectrum: every candidate k has an infinite {0} score'.format(method))
    # np.argmin returns the first minimum, i.e. the smallest k on ties
    k_hat = scores[int(np.argmin(vals))][0]
    return DetectionResult(k_hat=k_hat, scores=tuple((k, float(v)) for (k, _), v in zip(scores, vals)),
                           method=method)


def _check_dims(spec):
    if spec.n < 2 or spec.m < 2:
        raise ValueError('detection needs n >= 2 and m >= 2; got n={0}, m={1}'.format(spec.n, spec.m))


def noise_var_mle(spec, k):
    """Maximum likelihood noise variance: mean of the ``n - k`` smallest eigenvalues."""
    if not 0 <= k < spec.n:
        raise ValueError('k must satisfy 0 <= k < n = {0}'.format(spec.n))
    tail = spec.values[k:]
    if not np.any(tail > 0):
        raise DomainError('degenerate noise estimate: trailing eigenvalues are all zero')
    return float(tail.mean())


def t_statistic(spec, k):
    """Centered and bias-corrected q-statistic of the ``n - k`` smallest eigenvalues.

    The unknown ratio ``c`` is replaced by ``n/m``. Returns ``inf`` when the
    tail sums to zero.
    """
    n, m = spec.n, spec.m
    if not 0 <= k < min(n, m):
        raise ValueError('k must satisfy 0 <= k < min(n, m) = {0}'.format(min(n, m)))
    tail = spec.values[k:]
    s1 = tail.sum()
    if s1 <= 0:
        return inf
    ratio = (n - k) * np.dot(tail, tail) / (s1 * s1)
    return float((ratio - (1.0 + n / m)) * n - (2.0 / spec.beta - 1.0) * (n / m))


def _new_data_terms(spec):
    n, m = spec.n, spec.m
    weight = spec.beta / 4.0 * (m / n) ** 2
    return [weight * t_statistic(spec, k) ** 2 for k in range(min(n, m))]


def detect_new(spec):
    """Moment-based estimator: ``(beta/4)(m/n)^2 t_k^2 + 2(k+1)`` minimized over ``k``."""
    _check_dims(spec)
    data = _new_data_terms(spec)
    return _result([(k, d + 2.0 * (k + 1)) for k, d in enumerate(data)], 'new')


def detect_new_wideband(specs):
    """Wideband form: data terms summed over ``M`` bins, penalty ``2M(k+1)``."""
    specs = list(specs)
    if not specs:
        raise ValueError('at least one frequency bin is required')
    shape = (specs[0].n, specs[0].m, specs[0].beta)
    for i, s in enumerate(specs):
        if (s.n, s.m, s.beta) != shape:
            raise ValueError('bin {0} has (n, m, beta) = {1}, expected {2}'.format(
                i, (s.n, s.m, s.beta), shape))
        _check_dims(s)
    n_bins = len(specs)
    totals = np.sum([_new_data_terms(s) for s in specs], axis=0)
    return _result([(k, float(d) + 2.0 * n_bins * (k + 1)) for k, d in enumerate(totals)],
                   'new_wideband')


def log_mean_ratio(spec, k):
    """``log(g(k)/a(k))`` for the ``n - k`` smallest eigenvalues (``-inf`` if any is zero)."""
    tail = spec.values[k:]
    if tail[-1] <= 0:
        return -inf
    return float(np.mean(np.log(tail)) - log(tail.mean()))


def _wk_scores(spec, k_range, data_weight, penalty):
    n, m = spec.n, spec.m
    scores = []
    for k in k_range:
        lr = log_mean_ratio(spec, k)
        data = inf if lr == -inf else -data_weight * (n - k) * m * lr
        scores.append((k, data + penalty(k)))
    return scores


def _require_m_gt_n(spec, name):
    if spec.m <= spec.n:
        raise ValueError('{0} requires m>n (derived assuming m > n); got n={1}, m={2}'.format(
            name, spec.n, spec.m))


def detect_aic_wk(spec):
    """Wax-Kailath AIC over ``0 <= k < n``."""
    _require_m_gt_n(spec, 'AIC-WK')
    n = spec.n
    return _result(_wk_scores(spec, range(n), 2.0, lambda k: 2.0 * k * (2 * n - k)), 'aic_wk')


def _mdl_penalty(spec):
    n, logm = spec.n, log(spec.m)
    return lambda k: 0.5 * k * (2 * n - k) * logm


def detect_mdl_wk(spec):
    """Wax-Kailath MDL over ``0 <= k < n``."""
    _require_m_gt_n(spec, 'MDL-WK')
    return _result(_wk_scores(spec, range(spec.n), 1.0, _mdl_penalty(spec)), 'mdl_wk')


def detect_mdl_modified(spec):
    """MDL with ``k`` restricted to ``[0, min(n, m))``.

    Exact zero eigenvalues in a tail make that ``k`` infeasible. Since the
    spectrum is sorted, a singular SCM (``m < n``) leaves no feasible ``k``
    and DomainError is raised.
    """
    _check_dims(spec)
    k_range = range(min(spec.n, spec.m))
    return _result(_wk_scores(spec, k_range, 1.0, _mdl_penalty(spec)), 'mdl_modified')


DETECTORS = {
    'new': detect_new,
    'aic_wk': detect_aic_wk,
    'mdl_wk': detect_mdl_wk,
    'mdl_modified': detect_mdl_modified,
}


def detect(spec, method='new'):
    """Runs the single-spectrum detector named ``method``."""
    try:
        fn = DETECTORS[method]
    except KeyError:
        raise ValueError('unknown method {0!r}; choose from {1}'.format(method, sorted(DETECTORS)))
    return fn(spec)
