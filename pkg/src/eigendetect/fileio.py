"""CSV/JSON readers and writers for snapshot matrices and eigenvalue lists.

Snapshot CSV: one row per sensor, one column per snapshot. Complex data
uses ``2m`` columns holding interleaved ``re, im`` pairs.

Eigenvalue files: a JSON array (``.json`` suffix, or text starting with
``[``) or a single-column CSV. Writers use ``repr`` so floats round-trip
exactly.
"""
import json
from pathlib import Path

import numpy as np

from .covariance import SnapshotMatrix


def read_snapshots_csv(path, complex_data=False):
    try:
        raw = np.loadtxt(path, delimiter=',', ndmin=2, dtype=float)
    except ValueError as exc:
        raise ValueError('{0}: not a numeric CSV matrix ({1})'.format(path, exc)) from exc
    if complex_data:
        if raw.shape[1] % 2:
            raise ValueError('{0}: complex snapshot CSV needs an even number of columns '
                             '(interleaved re,im); got {1}'.format(path, raw.shape[1]))
        raw = raw[:, 0::2] + 1j * raw[:, 1::2]
    return SnapshotMatrix(raw)


def write_snapshots_csv(path, snapshots):
    data = snapshots.data
    if np.iscomplexobj(data):
        out = np.empty((data.shape[0], 2 * data.shape[1]))
        out[:, 0::2], out[:, 1::2] = data.real, data.imag
        data = out
    lines = [','.join(repr(float(v)) for v in row) for row in data]
    Path(path).write_text('\n'.join(lines) + '\n')


def read_eigenvalues(path):
    text = Path(path).read_text()
    if Path(path).suffix.lower() == '.json' or text.lstrip().startswith('['):
        try:
            vals = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError('{0}: invalid JSON ({1})'.format(path, exc)) from exc
        if not isinstance(vals, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals):
            raise ValueError('{0}: expected a JSON array of numbers'.format(path))
        return np.array(vals, dtype=float)
    rows = [r.strip() for r in text.splitlines() if r.strip()]
    try:
        return np.array([float(r) for r in rows])
    except ValueError as exc:
        raise ValueError('{0}: expected one number per line ({1})'.format(path, exc)) from exc


def write_eigenvalues(path, values):
    values = [float(v) for v in values]
    if Path(path).suffix.lower() == '.json':
        Path(path).write_text(json.dumps(values) + '\n')
    else:
        Path(path).write_text(''.join(repr(v) + '\n' for v in values))
