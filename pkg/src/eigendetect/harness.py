"""Seeded Monte-Carlo experiments for the detectors and the spectral laws.

Every trial draws its data from its own random stream keyed by
``(seed, cell, trial)``. Workers only return integer counts, so reports are
byte-identical for any number of worker processes.
"""
import csv
import io
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from math import sqrt

import jsonschema
import numpy as np
import scipy.stats

from .covariance import PopulationModel, check_field, sample_snapshots, scm_eigenvalues
from .detectors import DETECTORS
from .identifiability import k_eff, z_sep
from .rmt import MpLaw, check_beta, q_clt_params, q_statistic, spike_fluctuation_std, spike_limit
from .schemas import CONFIG_SCHEMA

SCHEMA_VERSION = '1'
SIM_METHODS = ('new', 'mdl_modified', 'aic_wk', 'mdl_wk')


@dataclass(frozen=True)
class ExperimentConfig:
    """Monte-Carlo design: one population model evaluated over an ``(n, m)`` grid.

    The model's dimension is taken from each grid cell.
    """
    signal_eigs: tuple
    noise_var: float
    grid: tuple
    trials: int
    methods: tuple
    seed: int
    field: str = 'complex'
    rotate_eigenvectors: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'signal_eigs', tuple(float(v) for v in self.signal_eigs))
        object.__setattr__(self, 'grid', tuple((int(n), int(m)) for n, m in self.grid))
        object.__setattr__(self, 'methods', tuple(self.methods))
        check_field(self.field)
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError('trials must be a positive integer')
        if not self.grid:
            raise ValueError('grid must contain at least one (n, m) cell')
        for n, m in self.grid:
            if n < 2 or m < 2:
                raise ValueError('grid cells need n >= 2 and m >= 2; got ({0}, {1})'.format(n, m))
        if not self.methods:
            raise ValueError('at least one method is required')
        for name in self.methods:
            if name not in SIM_METHODS:
                raise ValueError('unknown method {0!r}; choose from {1}'.format(name, SIM_METHODS))
        if len(set(self.methods)) != len(self.methods):
            raise ValueError('methods must not repeat')
        if int(self.seed) != self.seed or self.seed < 0 or self.seed >= 2 ** 64:
            raise ValueError('seed must be an integer in [0, 2**64)')
        # validates eigenvalue ordering and k < n for every cell
        for n, _ in self.grid:
            self.model(n)

    def model(self, n):
        return PopulationModel(self.signal_eigs, self.noise_var, n, self.field)

    @property
    def k_true(self):
        return len(self.signal_eigs)

    @property
    def beta(self):
        return 1 if self.field == 'real' else 2

    def to_dict(self):
        d = asdict(self)
        d['signal_eigs'] = list(self.signal_eigs)
        d['grid'] = [list(c) for c in self.grid]
        d['methods'] = list(self.methods)
        return d

    @classmethod
    def from_dict(cls, data, seed=None):
        """Builds a config from parsed JSON; ``seed`` fills in a missing ``"seed"``."""
        jsonschema.validate(data, CONFIG_SCHEMA)
        data = dict(data)
        if seed is not None:
            data['seed'] = seed
        if 'seed' not in data:
            raise ValueError('no seed given in the config or by the caller')
        return cls(**data)


def report_columns(k_true):
    top = k_true + 2
    counts = ['count_{0}'.format(j) for j in range(top + 1)] + ['count_over', 'count_error']
    probs = ['p_{0}'.format(j) for j in range(top + 1)] + ['p_over', 'p_error']
    return ['n', 'm', 'method', 'trials', 'seed', 'k_eff', 'z_sep'] + counts + probs


@dataclass(frozen=True)
class ExperimentReport:
    """Histogram of estimated model orders per grid cell and method.

    ``counts`` columns hold integers; ``p_*`` columns are derived from them.
    ``count_over`` tallies estimates above ``k_true + 2`` and ``count_error``
    trials where the detector raised.
    """
    config: ExperimentConfig
    rows: tuple
    schema_version: str = SCHEMA_VERSION

    @property
    def columns(self):
        return report_columns(self.config.k_true)

    def row(self, n, m, method):
        for r in self.rows:
            if (r['n'], r['m'], r['method']) == (n, m, method):
                return r
        raise KeyError((n, m, method))

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator='\n')
        writer.writerow(self.columns)
        for r in self.rows:
            writer.writerow(['' if r[c] is None else repr(r[c]) if isinstance(r[c], float) else r[c]
                             for c in self.columns])
        return buf.getvalue()

    def sidecar(self):
        return {
            'schema_version': self.schema_version,
            'columns': self.columns,
            'config': self.config.to_dict(),
        }

    def to_json(self):
        return json.dumps(self.sidecar(), indent=2, sort_keys=True) + '\n'

    def write(self, csv_path, json_path=None):
        """Writes the CSV and its JSON sidecar (default: same stem, ``.json``)."""
        from pathlib import Path

        csv_path = Path(csv_path)
        json_path = Path(json_path) if json_path else csv_path.with_suffix('.json')
        csv_path.write_text(self.to_csv())
        json_path.write_text(self.to_json())
        return csv_path, json_path


def _bucket(k_hat, top):
    return k_hat if k_hat <= top else 'over'


def _run_chunk(config, cell, start, stop):
    n, m = config.grid[cell]
    model = config.model(n)
    top = config.k_true + 2
    tallies = {name: Counter() for name in config.methods}
    for trial in range(start, stop):
        x = sample_snapshots(model, m, config.seed, stream=(cell, trial),
                             rotate=config.rotate_eigenvectors)
        try:
            spec = scm_eigenvalues(x)
        except (ArithmeticError, ValueError):
            for name in config.methods:
                tallies[name]['error'] += 1
            continue
        for name in config.methods:
            try:
                tallies[name][_bucket(DETECTORS[name](spec).k_hat, top)] += 1
            except (ArithmeticError, ValueError):
                tallies[name]['error'] += 1
    return cell, tallies


def _chunks(config, size):
    for cell in range(len(config.grid)):
        for start in range(0, config.trials, size):
            yield cell, start, min(start + size, config.trials)


def run_experiment(config, workers=1, chunk_size=50):
    """Runs every ``(cell, trial)`` and tallies the detectors' estimates.

    Args:
        config (ExperimentConfig): Experiment design.
        workers (int): Worker processes; 1 runs in-process. The report does
            not depend on this value.
        chunk_size (int): Trials per work unit.

    Returns:
        ExperimentReport
    """
    if workers < 1:
        raise ValueError('workers must be >= 1')
    tasks = list(_chunks(config, chunk_size))
    if workers == 1:
        results = [_run_chunk(config, *t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_chunk, *zip(*((config,) + t for t in tasks))))

    totals = [{name: Counter() for name in config.methods} for _ in config.grid]
    for cell, tallies in results:
        for name, counts in tallies.items():
            totals[cell][name].update(counts)

    top = config.k_true + 2
    rows = []
    for cell, (n, m) in enumerate(config.grid):
        keff = k_eff(config.model(n), n, m)
        zs = z_sep(config.signal_eigs[keff - 1], config.noise_var, n, m, config.beta) if keff else None
        for name in config.methods:
            counts = totals[cell][name]
            row = {'n': n, 'm': m, 'method': name, 'trials': config.trials,
                   'seed': config.seed, 'k_eff': keff, 'z_sep': zs}
            keys = list(range(top + 1)) + ['over', 'error']
            for key in keys:
                row['count_{0}'.format(key)] = counts.get(key, 0)
            for key in keys:
                row['p_{0}'.format(key)] = counts.get(key, 0) / config.trials
            rows.append(row)
    return ExperimentReport(config=config, rows=tuple(rows))


def _field_for(beta):
    beta = check_beta(beta)
    if beta == 4:
        raise ValueError('quaternion (beta=4) snapshot generation is not supported')
    return 'real' if beta == 1 else 'complex'


@dataclass(frozen=True)
class CltValidation:
    empirical_mean: float
    empirical_var: float
    theory_mean: float
    theory_var: float
    samples: np.ndarray


def clt_validation(noise_var, n, m, beta, trials, seed):
    """Samples ``n * (q - (1 + n/m))`` over noise-only trials.

    Returns the sample mean and variance beside their Gaussian limits.
    """
    if trials < 2:
        raise ValueError('trials must be >= 2')
    model = PopulationModel((), noise_var, n, _field_for(beta))
    center, shift, var = q_clt_params(n / m, beta)
    stats = np.empty(trials)
    for t in range(trials):
        spec = scm_eigenvalues(sample_snapshots(model, m, seed, stream=(t,)))
        stats[t] = n * (q_statistic(spec.values) - center)
    return CltValidation(float(stats.mean()), float(stats.var(ddof=1)), shift, var, stats)


@dataclass(frozen=True)
class SpikeValidation:
    empirical_mean_l1: float
    predicted_limit: float
    predicted_std: float
    z_score: float
    trials: int


def spike_validation(lambda_j, noise_var, n, m, beta, trials, seed, rotate=True):
    """Compares the mean largest sample eigenvalue of a one-spike model with its limit.

    ``predicted_std`` and ``z_score`` are None when ``lambda_j`` is at or
    below the phase transition.
    """
    model = PopulationModel((lambda_j,), noise_var, n, _field_for(beta))
    law = MpLaw.from_dims(n, m, noise_var)
    tops = [scm_eigenvalues(sample_snapshots(model, m, seed, stream=(t,), rotate=rotate)).values[0]
            for t in range(trials)]
    mean = float(np.mean(tops))
    limit = spike_limit(lambda_j, law)
    try:
        std = spike_fluctuation_std(lambda_j, law, beta, n)
    except ArithmeticError:
        return SpikeValidation(mean, limit, None, None, trials)
    return SpikeValidation(mean, limit, std, (mean - limit) / (std / sqrt(trials)), trials)


def moment_centering(noise_var, n, m, beta, seeds):
    """Averages ``mean(l)`` and ``mean(l**2)`` of noise-only spectra over ``seeds``.

    Returns ``(avg_first, avg_second, limit_first, limit_second)``.
    """
    model = PopulationModel((), noise_var, n, _field_for(beta))
    firsts, seconds = [], []
    for s in seeds:
        vals = scm_eigenvalues(sample_snapshots(model, m, s)).values
        firsts.append(vals.mean())
        seconds.append(np.mean(vals ** 2))
    law = MpLaw.from_dims(n, m, noise_var)
    return float(np.mean(firsts)), float(np.mean(seconds)), law.moment(1), law.moment(2)


def mp_ks_distance(noise_var, n, m, beta, seed):
    """Kolmogorov-Smirnov distance between a noise-only spectrum and its MP law."""
    model = PopulationModel((), noise_var, n, _field_for(beta))
    vals = scm_eigenvalues(sample_snapshots(model, m, seed)).values
    law = MpLaw.from_dims(n, m, noise_var)
    return float(scipy.stats.kstest(vals, law.cdf).statistic)
