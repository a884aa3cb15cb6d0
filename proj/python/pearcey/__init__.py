"""Thinned Pearcey process: kernel, Fredholm log-determinants, asymptotics and checks."""

from ._pearcey import (
    PearceyError,
    beta_of_gamma,
    chf_verify,
    clt_distance,
    counting_stats,
    f_gamma1,
    f_large_gap,
    h_gamma1,
    h_large_s,
    hamiltonian_trajectory,
    kernel,
    kernel_diagonal,
    logdet,
    logdet_converged,
    moments,
    pearcey_p,
    pearcey_q,
    run_acceptance,
)

__version__ = "0.1.0"

__all__ = [
    "PearceyError",
    "beta_of_gamma",
    "chf_verify",
    "clt_distance",
    "counting_stats",
    "f_gamma1",
    "f_large_gap",
    "h_gamma1",
    "h_large_s",
    "hamiltonian_trajectory",
    "kernel",
    "kernel_diagonal",
    "logdet",
    "logdet_converged",
    "moments",
    "pearcey_p",
    "pearcey_q",
    "run_acceptance",
]
