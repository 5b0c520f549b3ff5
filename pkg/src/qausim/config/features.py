"""Feature flags for qausim.

Flags select between documented variants of the algorithms. Every function
that reads a flag also takes an explicit keyword override, so sweeps and
tests never need to patch module state.
"""

# =============================================================================
# Congestion point
# =============================================================================

# Skip a sampled feedback frame when it would go to the same source as the
# previous frame from this port
FEATURE_SAMPLING_DEDUP_ENABLED = True

# =============================================================================
# QCN reaction point
# =============================================================================

# Hyper-active increase once both byte counter and timer are past FR
FEATURE_HAI_ENABLED = True

# Target rate reduction: R > 10*r at RD divides R by 8 instead of R <- r
FEATURE_QCN_TRR_ENABLED = False

# Extra fast recovery: at most one RD per cycle
FEATURE_QCN_EFR_ENABLED = False

# =============================================================================
# Fluid analysis
# =============================================================================

# omega* uses a3^4 under the inner root; False selects the a4^3 form
FEATURE_OMEGA_STAR_QUARTIC = True
