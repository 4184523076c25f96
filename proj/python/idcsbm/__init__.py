# Apache License, Version 2.0, refer to LICENSE.txt
"""Infinite degree-corrected stochastic blockmodel.

Partitions are plain lists of group labels; networks are ``Network``
objects built from edge-list text or with ``Network.set``.
"""

from ._core import (
    Hyperparams,
    Network,
    auc,
    enumerate_partitions,
    exact_posterior,
    gibbs_conditional,
    load_edge_list,
    log_crp,
    log_evidence,
    make_holdout,
    nmi,
    run_chains,
    sample_network,
)

__all__ = [
    "Hyperparams",
    "Network",
    "auc",
    "enumerate_partitions",
    "exact_posterior",
    "gibbs_conditional",
    "load_edge_list",
    "log_crp",
    "log_evidence",
    "make_holdout",
    "nmi",
    "run_chains",
    "sample_network",
]
