"""Stochastic-geometry Monte Carlo simulator."""

from .montecarlo import (
    Estimate,
    GeometrySample,
    SampleStream,
    ZetaSamples,
    default_r_max,
    interference_power,
    mc_avg_coding_rate,
    mc_capacity,
    mc_dispersion,
    mc_laplace_B,
    mc_laplace_B_grid,
    mc_outage,
    mc_outage_ibl,
    mc_sinr,
    resolve_r_max,
    sample_ppp_annulus,
    simulate_zeta,
    tail_zeta_mean,
    tail_zeta_std,
)

__all__ = [
    "Estimate",
    "GeometrySample",
    "SampleStream",
    "ZetaSamples",
    "default_r_max",
    "interference_power",
    "mc_avg_coding_rate",
    "mc_capacity",
    "mc_dispersion",
    "mc_laplace_B",
    "mc_laplace_B_grid",
    "mc_outage",
    "mc_outage_ibl",
    "mc_sinr",
    "resolve_r_max",
    "sample_ppp_annulus",
    "simulate_zeta",
    "tail_zeta_mean",
    "tail_zeta_std",
]
