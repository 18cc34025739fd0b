"""Brute-force reference enumerators for the detectors.

Written directly from the criteria with plain Python loops and math.fsum;
shares no code with eigendetect.detectors.
"""
import math


def _tail(eigs, k):
    return sorted(eigs, reverse=True)[k:]


def new_scores(eigs, n, m, beta):
    out = []
    for k in range(min(n, m)):
        tail = _tail(eigs, k)
        s1 = math.fsum(tail)
        if s1 == 0:
            out.append(math.inf)
            continue
        s2 = math.fsum(x * x for x in tail)
        t = ((n - k) * s2 / (s1 * s1) - (1 + n / m)) * n - (2 / beta - 1) * n / m
        out.append(beta / 4 * (m / n) ** 2 * t * t + 2 * (k + 1))
    return out


def wideband_scores(bins, n, m, beta):
    per_bin = [new_scores(e, n, m, beta) for e in bins]
    big_m = len(bins)
    out = []
    for k in range(min(n, m)):
        data = math.fsum(s[k] - 2 * (k + 1) for s in per_bin)
        out.append(data + 2 * big_m * (k + 1))
    return out


def _log_g_over_a(tail):
    if min(tail) == 0:
        return None
    p = len(tail)
    geo = math.exp(math.fsum(math.log(x) for x in tail) / p)
    return math.log(geo / (math.fsum(tail) / p))


def wk_scores(eigs, n, m, kind):
    """kind: 'aic', 'mdl' (k < n) or 'mdl_mod' (k < min(n, m))."""
    kmax = min(n, m) if kind == 'mdl_mod' else n
    out = []
    for k in range(kmax):
        lr = _log_g_over_a(_tail(eigs, k))
        if lr is None:
            out.append(math.inf)
        elif kind == 'aic':
            out.append(-2 * (n - k) * m * lr + 2 * k * (2 * n - k))
        else:
            out.append(-(n - k) * m * lr + 0.5 * k * (2 * n - k) * math.log(m))
    return out


def argmin_smallest(scores):
    best, best_k = math.inf, None
    for k, s in enumerate(scores):
        if s < best:
            best, best_k = s, k
    return best_k
