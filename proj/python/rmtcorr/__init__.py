"""Random-matrix spectral indicators for correlation analysis of grid measurements."""

from ._rmtcorr import (
    RmtError,
    analyze_window,
    correlation_analysis,
    detect_signal_areas,
    eigenvalues,
    haar_unitary,
    kde,
    mp_law_pdf,
    msr,
    noise_magnitude,
    ring_law_pdf,
    ring_radii,
    run_series,
    simulate,
    singular_value_equivalent,
    snr,
    standardize_rows,
    theoretical_msr,
    vsr,
)

__all__ = [
    "RmtError",
    "analyze_window",
    "correlation_analysis",
    "detect_signal_areas",
    "eigenvalues",
    "haar_unitary",
    "kde",
    "mp_law_pdf",
    "msr",
    "noise_magnitude",
    "ring_law_pdf",
    "ring_radii",
    "run_series",
    "simulate",
    "singular_value_equivalent",
    "snr",
    "standardize_rows",
    "theoretical_msr",
    "vsr",
]
