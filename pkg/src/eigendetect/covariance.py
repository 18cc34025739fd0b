"""Snapshot generation, sample covariance matrices and their spectra.

Random draws come from numpy's counter-based Philox bit generator, keyed by
a ``SeedSequence`` built from ``(seed, *stream)``. A Monte-Carlo trial keyed
by ``(seed, cell, trial)`` therefore produces the same data whether it runs
serially or in a worker process.
"""
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from .errors import DomainError
from .rmt import check_beta

FIELDS = {'real': 1, 'complex': 2}

# Relative round-off floor for eigenvalues, multiplied by n.
EIG_RTOL = 1e-12


def stream_rng(seed, *stream):
    """Returns a Philox generator for the stream ``(seed, *stream)``."""
    key = [int(seed), *(int(s) for s in stream)]
    if any(k < 0 for k in key):
        raise ValueError('seed and stream indices must be nonnegative integers')
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def check_field(name):
    if name not in FIELDS:
        raise ValueError("field must be 'real' or 'complex'; got {0!r}".format(name))
    return name


@dataclass(frozen=True)
class PopulationModel:
    """Spiked population covariance: ``k`` signal eigenvalues over flat noise.

    Args:
        signal_eigs: Signal eigenvalues, descending, each above ``noise_var``.
        noise_var: Noise variance (the repeated smallest eigenvalue).
        dim: Dimension ``n`` of the snapshot vectors.
        field: ``'real'`` or ``'complex'`` (circularly symmetric) snapshots.
    """
    signal_eigs: tuple
    noise_var: float
    dim: int
    field: str = 'complex'

    def __post_init__(self):
        eigs = tuple(float(v) for v in self.signal_eigs)
        object.__setattr__(self, 'signal_eigs', eigs)
        check_field(self.field)
        if not (np.isfinite(self.noise_var) and self.noise_var > 0):
            raise ValueError('noise_var must be positive')
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError('dim must be a positive integer')
        if any(a < b for a, b in zip(eigs, eigs[1:])):
            raise ValueError('signal_eigs must be sorted in descending order')
        if any(not np.isfinite(v) or v <= self.noise_var for v in eigs):
            raise ValueError('signal_eigs must be finite and strictly greater than noise_var')
        if len(eigs) >= self.dim:
            raise ValueError('number of signals must be smaller than dim')

    @property
    def k(self):
        return len(self.signal_eigs)

    @property
    def beta(self):
        return FIELDS[self.field]

    @property
    def eigenvalues(self):
        """All ``dim`` population eigenvalues, descending."""
        out = np.full(self.dim, float(self.noise_var))
        out[:self.k] = self.signal_eigs
        return out

    def with_dim(self, dim):
        return replace(self, dim=dim)


@dataclass(frozen=True)
class SnapshotMatrix:
    """An ``n x m`` matrix whose columns are snapshots."""
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim != 2 or min(data.shape) < 1:
            raise ValueError('snapshot data must be a nonempty 2-D array')
        if not np.iscomplexobj(data):
            data = data.astype(float)
        if not np.all(np.isfinite(data)):
            raise ValueError('snapshot data must be finite')
        data = data.copy()
        data.flags.writeable = False
        object.__setattr__(self, 'data', data)

    @property
    def n(self):
        return self.data.shape[0]

    @property
    def m(self):
        return self.data.shape[1]

    @property
    def field(self):
        return 'complex' if np.iscomplexobj(self.data) else 'real'


@dataclass(frozen=True)
class EigenSpectrum:
    """Sample eigenvalues ``l_1 >= ... >= l_n`` with the sample size ``m``.

    Values are sorted on construction, so any order is accepted.
    """
    values: np.ndarray
    m: int
    beta: int = 2
    n: int = field(init=False)

    def __post_init__(self):
        vals = np.sort(np.asarray(self.values, dtype=float).ravel())[::-1].copy()
        if vals.size < 1:
            raise ValueError('spectrum must contain at least one eigenvalue')
        if not np.all(np.isfinite(vals)):
            raise ValueError('eigenvalues must be finite')
        if vals[-1] < 0:
            raise ValueError('eigenvalues must be nonnegative; got {0!r}'.format(vals[-1]))
        if int(self.m) != self.m or self.m < 1:
            raise ValueError('m must be a positive integer')
        check_beta(self.beta)
        if np.count_nonzero(vals) > min(vals.size, self.m):
            raise ValueError(
                'at most min(n, m) = {0} eigenvalues can be nonzero; got {1}'.format(
                    min(vals.size, self.m), np.count_nonzero(vals)))
        vals.flags.writeable = False
        object.__setattr__(self, 'values', vals)
        object.__setattr__(self, 'm', int(self.m))
        object.__setattr__(self, 'beta', int(self.beta))
        object.__setattr__(self, 'n', int(vals.size))

    @property
    def ratio(self):
        """The plug-in ratio ``c_m = n/m``."""
        return self.n / self.m

    def scaled(self, alpha):
        return EigenSpectrum(self.values * alpha, m=self.m, beta=self.beta)


def haar_rotation(n, field, rng):
    """Draws a Haar-distributed orthogonal (real) or unitary (complex) matrix."""
    g = rng.standard_normal((n, n))
    if field == 'complex':
        g = g + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def white_noise(n, m, field, rng):
    """Unit-variance white noise; complex entries have re/im variance 1/2 each."""
    if field == 'complex':
        z = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
        return z * np.sqrt(0.5)
    return rng.standard_normal((n, m))


def sample_snapshots(model, m, seed, stream=(), rotate=True):
    """Draws ``m`` i.i.d. snapshots from ``N_n(0, R)`` under ``model``.

    ``R = U diag(eigenvalues) U'`` with ``U`` Haar-distributed when ``rotate``
    is set, the identity otherwise. Noise-only models have ``R = noise_var * I``
    and skip the rotation.

    Args:
        model (PopulationModel): Ground truth covariance.
        m (int): Number of snapshots.
        seed (int): Base seed.
        stream (tuple of int): Extra stream key, e.g. ``(cell, trial)``.
        rotate (bool): Whether to apply a random eigenvector rotation.

    Returns:
        SnapshotMatrix: Bit-identical for identical arguments.
    """
    if int(m) != m or m < 1:
        raise ValueError('m must be a positive integer')
    rng = stream_rng(seed, *stream)
    n = model.dim
    u = haar_rotation(n, model.field, rng) if rotate and model.k > 0 else None
    x = np.sqrt(model.eigenvalues)[:, None] * white_noise(n, int(m), model.field, rng)
    if u is not None:
        x = u @ x
    return SnapshotMatrix(x)


def scm(snapshots):
    """Sample covariance ``(1/m) X X'`` with ``'`` the conjugate transpose."""
    x = snapshots.data
    r = x @ x.conj().T / snapshots.m
    # exact self-adjointness against round-off
    return 0.5 * (r + r.conj().T)


def _clamped_eigs(mat, n):
    try:
        w = scipy.linalg.eigvalsh(mat)
    except np.linalg.LinAlgError as exc:
        raise DomainError('eigensolver failed to converge') from exc
    w = w[::-1]
    top = max(w[0], 0.0)
    tol = EIG_RTOL * n * top
    if w[-1] < -tol:
        raise DomainError('covariance not PSD: eigenvalue {0!r}'.format(w[-1]))
    w[np.abs(w) <= tol] = 0.0
    return np.clip(w, 0.0, None)


def scm_eigenvalues(snapshots):
    """Descending eigenvalues of the sample covariance matrix.

    For ``m < n`` the nonzero eigenvalues come from the ``m x m`` Gram matrix
    ``(1/m) X' X`` and the spectrum is padded with ``n - m`` exact zeros.
    Eigenvalues within ``1e-12 * n * l_1`` of zero are set to zero.
    """
    x, n, m = snapshots.data, snapshots.n, snapshots.m
    if m < n:
        gram = x.conj().T @ x / m
        gram = 0.5 * (gram + gram.conj().T)
        w = np.concatenate([_clamped_eigs(gram, n), np.zeros(n - m)])
    else:
        w = _clamped_eigs(scm(snapshots), n)
    return EigenSpectrum(w, m=m, beta=FIELDS[snapshots.field])


def bin_spectra(bins):
    """Per-frequency-bin spectra for wideband data; all bins share ``(n, m, field)``."""
    bins = list(bins)
    if not bins:
        raise ValueError('at least one frequency bin is required')
    shape = (bins[0].n, bins[0].m, bins[0].field)
    for i, b in enumerate(bins):
        if (b.n, b.m, b.field) != shape:
            raise ValueError('bin {0} has (n, m, field) = {1}, expected {2}'.format(
                i, (b.n, b.m, b.field), shape))
    return [scm_eigenvalues(b) for b in bins]
