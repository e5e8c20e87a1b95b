"""Decay-rate laboratory for the linearized free-boundary Stokes slab."""

from .errors import (ContinuationFailedError, DegenerateExponentError,
                     DegenerateParameterError, FitDomainError,
                     HypothesisNotMetError, InterpolationUnavailableError,
                     NoRootInBracketError, NotARootError, ParameterError,
                     SingularSystemError, SlabDecayError)
from .symbols import SlabParams, Symbol, eval_symbol, load_symbol_table, validate_symbol
from .dispersion import (KAPPA_MINUS, KAPPA_PLUS, DispersionResult,
                         build_matrix, det_dispersion, find_high_freq_root,
                         find_low_freq_root, find_scan_root, reconstruct_mode,
                         sweep_dispersion)
from .stokes1d import (EnergyCurve, Grid1D, ModeState, discrete_inequality_suite,
                       dissipation_xi, energy_xi, evolve, evolve_ramped,
                       evolve_transverse_heat, fit_decay_rate, lyapunov_xi,
                       project_state, state_from_json, state_to_json,
                       surface_state, zero_state)
from .synthesis import (FitRecord, InitialDataSpec, SynthesisResult,
                        fit_decay_law, synthesize_plane, synthesize_torus,
                        theoretical_envelope)
from .acceptance import CriterionResult, run_acceptance

__version__ = "0.1.0"
