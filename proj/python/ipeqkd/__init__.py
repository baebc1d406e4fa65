"""Intra-particle entanglement QKD toolkit.

Thin python surface over the C++ core: basis preparation, CHSH quantities,
side-channel attack states, key rates and the Monte-Carlo protocol engine.
"""

from ._core import (  # noqa: F401
    __version__,
    analytic_report,
    attacked_reduced_state,
    bob_analyzer,
    chsh,
    chsh_optimal,
    correlation,
    device_error,
    eve_posterior_g1,
    i_ab,
    i_ae_conventional,
    i_ae_from_bell,
    i_ae_side,
    is_entangled_ppt,
    key_rate,
    mub_overlap_table,
    phi_plus,
    prepare_basis,
    purity,
    qwp_attack_prepare,
    run_protocol,
    separable_bound_search,
    shannon_entropy,
    singlet,
    solve_threshold,
    threshold_e_ent,
    threshold_e_lr,
    werner,
)
