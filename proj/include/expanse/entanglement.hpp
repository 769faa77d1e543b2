#pragma once

#include "expanse/cosmology.hpp"
#include "expanse/phasespace.hpp"

// Renyi-2 Gaussian entanglement: closed forms for the channel's reduced
// states, a numerical entanglement-of-formation minimizer acting as the
// independent oracle, a PPT separability witness, and the monogamy residual.
// All values are in nats.

namespace expanse {

/// (1/2) ln det of one party's reduction of a pure state, where the infimum
/// over pure decompositions is saturated by the state itself. Throws if the
/// state is not pure (use the numeric minimizer for mixed states).
double pure_bipartite_entanglement(const CovarianceMatrix& cm, const ModePartition& partition);

struct ClampedValue {
    double value;
    bool clamped;  ///< true when the formula was positive on a separable state
};

/// Closed form for the (A,B) reduction. The raw formula is valid on the
/// entangled branch only; on PPT-separable states the value is clamped to 0
/// and flagged.
ClampedValue entanglement_ab_closed_checked(double s, double theta);
double entanglement_ab_closed(double s, double theta);

/// Closed form ln[(1+theta^2)/(1-theta^2)] for the (A,Abar) reduction;
/// independent of s.
double entanglement_a_abar_closed(double theta);

/// 1-vs-3 entanglement of the pure four-mode out-state for a single probe
/// mode: (1/2) ln det of the probe's reduced CM.
double one_to_three_entanglement(const CovarianceMatrix& cm4, const ModePartition& probe);

/// Simon criterion for 1x1-mode Gaussian states: separable iff the partial
/// transpose is still physical.
bool is_ppt_separable(const CovarianceMatrix& cm2);

struct EofOptions {
    int starts = 16;            ///< multi-starts from a fixed Halton sequence
    int max_iterations = 1200;  ///< simplex iterations per penalty stage
    double lambda0 = 1e4;       ///< initial penalty weight
    int escalations = 8;        ///< x10 penalty escalations per start
    double feasibility_tol = 1e-9;
    bool ppt_shortcut = true;   ///< return 0 immediately for PPT-separable input
};

struct EofResult {
    double value = 0.0;
    bool converged = false;            ///< a feasible candidate was found
    double feasibility_violation = 0;  ///< -min eig(sigma - gamma) at the winner
    long evaluations = 0;
    bool via_ppt = false;              ///< separability witness short-circuited
};

/// Numerical Renyi-2 Gaussian entanglement of formation of a two-mode state:
/// minimizes (1/2) ln det gamma_A over pure two-mode candidates gamma <= sigma.
/// Candidates are parameterized as local symplectics (Euler decomposed) acting
/// on a two-mode squeezed vacuum, 7 parameters in total; feasibility is
/// enforced by penalty on the minimum eigenvalue of sigma - gamma, with the
/// Williamson pure part of sigma as a feasible anchor.
EofResult gaussian_renyi2_eof_numeric(const CovarianceMatrix& cm2, const EofOptions& opts = {});

/// Minimum CKW slack over the two probe choices (A and Abar); the Bbar-side
/// probes duplicate these by symmetry.
double residual_entanglement(const InitialState& init, const BogoliubovData& bog);

/// Every pairwise, 1-vs-3, and residual value for the four-mode out-state.
struct EntanglementReport {
    double e_ab = 0.0;
    double e_abar_bbar = 0.0;
    double e_a_bbar = 0.0;
    double e_a_abar = 0.0;
    double e_a_rest = 0.0;
    double e_abar_rest = 0.0;
    double residual = 0.0;
    bool e_ab_clamped = false;

    // Parameter echo; the cosmological entries are NaN when the report was
    // built from a bare mode-mixing ratio.
    double s = 0.0;
    double theta = 0.0;
    double k = 0.0;
    double m = 0.0;
    double epsilon = 0.0;
    double sigma_rate = 0.0;
};

EntanglementReport full_report(const InitialState& init, const BogoliubovData& bog);
EntanglementReport full_report(const InitialState& init, double k, const ExpansionModel& model);

}  // namespace expanse
