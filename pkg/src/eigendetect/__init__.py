"""Signal-count estimation from sample covariance eigenvalues."""
from .covariance import (EigenSpectrum, PopulationModel, SnapshotMatrix, bin_spectra,
                         sample_snapshots, scm, scm_eigenvalues)
from .detectors import (DetectionResult, detect, detect_aic_wk, detect_mdl_modified,
                        detect_mdl_wk, detect_new, detect_new_wideband)
from .errors import DomainError
from .harness import ExperimentConfig, ExperimentReport, run_experiment
from .identifiability import (TwoSourceGeometry, identifiability_condition, k_eff,
                              two_source_eigs, two_source_keff, z_sep)
from .rmt import MpLaw, q_statistic, spike_fluctuation_std, spike_limit

__version__ = '0.1.0'
