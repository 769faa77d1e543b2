#pragma once

#include <vector>

#include "expanse/phasespace.hpp"

// The expansion channel: a smooth 1+1D scale-factor profile
// a(eta)^2 = 1 + epsilon (1 + tanh(sigma eta)) interpolating between two flat
// regions. Each field mode k picks up particle content controlled by a single
// ratio theta in [0,1), and the in->out evolution acts on phase space as a
// two-mode squeezing transform per (mode, antimode) pair.

namespace expanse {

struct ExpansionModel {
    double epsilon;     ///< expansion volume, > 0
    double sigma_rate;  ///< expansion rapidity, > 0
    double mass;        ///< field mass, >= 0 (massless modes decouple)

    ExpansionModel(double epsilon, double sigma_rate, double mass);
};

/// Asymptotic frequencies of a mode of momentum k.
struct ModeSpec {
    double k;
    double omega_in;     ///< sqrt(k^2 + m^2)
    double omega_out;    ///< sqrt(k^2 + m^2 (1 + 2 epsilon))
    double omega_plus;   ///< (omega_out + omega_in) / 2
    double omega_minus;  ///< (omega_out - omega_in) / 2
};

ModeSpec frequencies(double k, const ExpansionModel& model);

/// Per-mode particle-creation data; |alpha|^2 - |beta|^2 = 1 by construction.
struct BogoliubovData {
    double alpha_mod;       ///< |alpha_k| >= 1
    double beta_mod;        ///< |beta_k| >= 0
    double theta;           ///< |beta_k / alpha_k| in [0, 1)
    double r;               ///< squeezing, cosh r = |alpha_k|
    double mean_particles;  ///< |beta_k|^2
};

/// Hyperbolic route: theta^2 = sinh^2(pi omega_- / sigma) / sinh^2(pi omega_+ / sigma),
/// evaluated in log space so large arguments cannot overflow.
BogoliubovData bogoliubov(const ModeSpec& mode, const ExpansionModel& model);

/// Same data from a mode-mixing ratio obtained elsewhere.
BogoliubovData bogoliubov_from_theta(double theta);

struct BogoliubovModuli {
    double alpha_sq;
    double beta_sq;
};

/// Gamma-function route through the mode-matching coefficients, using
/// |Gamma(ix)|^2 = pi / (x sinh pi x) and |Gamma(1+ix)|^2 = pi x / sinh(pi x).
/// Phases are dropped; only moduli survive downstream. omega_- = 0 returns
/// (1, 0) by continuity (the Gamma pole cancels against the vanishing ratio).
BogoliubovModuli bogoliubov_moduli_via_gamma(const ModeSpec& mode, const ExpansionModel& model);

/// Number-basis amplitudes A_n = sqrt(1-theta^2) theta^n for n = 0..n_max.
std::vector<double> fock_amplitudes(double theta, int n_max);

/// Two-mode squeezer S = (1-theta^2)^{-1/2} [[I, theta Z], [theta Z, I]].
SymplecticTransform squeeze_transform(double theta);

/// log(sinh x) for x > 0 without overflow.
double log_sinh(double x);

struct InitialState {
    double s;  ///< two-mode squeezing of the shared input state, >= 0

    explicit InitialState(double s);
};

/// Canonical mode order of the four-mode out-state.
namespace modes {
inline constexpr int a = 0;
inline constexpr int abar = 1;
inline constexpr int b = 2;
inline constexpr int bbar = 3;
}  // namespace modes

/// Shared two-mode squeezed input on (A, B): diagonal blocks cosh(2s) I,
/// off-diagonal sinh(2s) Z.
CovarianceMatrix in_state(const InitialState& init);

/// Four-mode out-state in canonical order (A, Abar, B, Bbar): the input state
/// direct-summed with vacuum antimodes, then squeezed pairwise. Both pairs use
/// the same channel; the two-argument overload below is the extension point
/// for observers seeing different mode-mixing ratios.
CovarianceMatrix out_state(const InitialState& init, const BogoliubovData& bog);
CovarianceMatrix out_state(const InitialState& init, const BogoliubovData& bog_a,
                           const BogoliubovData& bog_b);

// Closed-form two-mode reductions of the out-state, built directly from
// (s, theta). Cross-checked against partial traces of out_state in the tests.
CovarianceMatrix reduced_ab(double s, double theta);
CovarianceMatrix reduced_abar_bbar(double s, double theta);
CovarianceMatrix reduced_a_bbar(double s, double theta);
CovarianceMatrix reduced_a_abar(double s, double theta);

}  // namespace expanse
