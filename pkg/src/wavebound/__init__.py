"""Lower bounds and achievability simulations for optical phase waveform
estimation under power-law prior spectra."""

from .bounds import (
    BoundReport,
    Branch,
    ProbeConfig,
    characteristic_times,
    coherent_fidelity,
    fidelity_lower_bound,
    gaussian_min_overlap,
    scaling_coefficient,
    scaling_exponent,
    waveform_lower_bound,
    z_bound,
    z_bound_periodic,
    z_numeric_oracle,
)
from .errors import InsufficientRecordError, QuadratureError, RegimeViolationError
from .estimator import (
    ErrorBudget,
    MeasurementRecord,
    Mode,
    achievable_coefficient,
    aliasing_error_closed_form,
    interpolate,
    measurement_noise_std,
    mse_summary,
    optimal_pulse_period,
    predicted_total_error,
    simulate_measurements,
    unwrap_estimates,
    wrap_error_bound,
    yovits_jackson_error,
)
from .gp import (
    SynthesisConfig,
    WaveformTrace,
    empirical_autocovariance,
    sample_waveform,
    sample_waveform_fft,
    trace_stream,
    trace_to_csv,
)
from .simulate import SimulationConfig, SimulationReport, run_simulation, sweep_flux
from .specfun import (
    BoundConstants,
    airy_root_magnitude,
    constants,
    digamma,
    erfc,
    modulo_2pi,
    sinc,
    solve_lambda,
    triangle,
)
from .spectrum import (
    PowerLawSpectrum,
    TailSpectrumBound,
    autocovariance,
    increment_variance,
    increment_variance_bound,
    inverse_quadratic_form,
    spectral_density,
    tail_quadratic_form_bound,
)
from .verify import (
    VerificationResult,
    covariance_Vn,
    digamma_tail_coefficient,
    run_verification_suite,
    sinc_tail_sum,
    wrap_constant_scan,
)

__version__ = "0.1.0"
