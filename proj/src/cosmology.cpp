#include "expanse/cosmology.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace expanse {

namespace {

constexpr double kPi = std::numbers::pi;

void require_theta(double theta, const char* who) {
    if (!(theta >= 0.0 && theta < 1.0)) {
        std::ostringstream os;
        os << who << ": theta must lie in [0, 1), got " << theta;
        throw std::invalid_argument(os.str());
    }
}

Eigen::Matrix2d pauli_z() {
    Eigen::Matrix2d z;
    z << 1.0, 0.0, 0.0, -1.0;
    return z;
}

/// Symmetric 4x4 CM with scalar diagonal blocks and a common off-diagonal block.
Eigen::MatrixXd two_mode_blocks(double diag_a, double diag_b, const Eigen::Matrix2d& off) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    m.block<2, 2>(0, 0) = diag_a * Eigen::Matrix2d::Identity();
    m.block<2, 2>(2, 2) = diag_b * Eigen::Matrix2d::Identity();
    m.block<2, 2>(0, 2) = off;
    m.block<2, 2>(2, 0) = off.transpose();
    return m;
}

}  // namespace

ExpansionModel::ExpansionModel(double epsilon_, double sigma_rate_, double mass_)
    : epsilon(epsilon_), sigma_rate(sigma_rate_), mass(mass_) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("ExpansionModel: epsilon must be > 0");
    }
    if (!(sigma_rate > 0.0) || !std::isfinite(sigma_rate)) {
        throw std::invalid_argument("ExpansionModel: sigma_rate must be > 0");
    }
    if (!(mass >= 0.0) || !std::isfinite(mass)) {
        throw std::invalid_argument("ExpansionModel: mass must be >= 0");
    }
}

ModeSpec frequencies(double k, const ExpansionModel& model) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw std::invalid_argument("frequencies: momentum must be > 0");
    }
    ModeSpec spec;
    spec.k = k;
    const double m2 = model.mass * model.mass;
    spec.omega_in = std::sqrt(k * k + m2);
    spec.omega_out = std::sqrt(k * k + m2 * (1.0 + 2.0 * model.epsilon));
    spec.omega_plus = 0.5 * (spec.omega_out + spec.omega_in);
    // Rationalized difference; the direct subtraction cancels for small eps*m^2.
    spec.omega_minus = model.epsilon * m2 / (spec.omega_out + spec.omega_in);
    return spec;
}

double log_sinh(double x) {
    if (!(x > 0.0)) {
        throw std::invalid_argument("log_sinh: argument must be > 0");
    }
    if (x > 20.0) {
        return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2;
    }
    return std::log(std::sinh(x));
}

BogoliubovData bogoliubov(const ModeSpec& mode, const ExpansionModel& model) {
    double theta = 0.0;
    if (mode.omega_minus > 0.0) {
        const double lo = kPi * mode.omega_minus / model.sigma_rate;
        const double hi = kPi * mode.omega_plus / model.sigma_rate;
        theta = std::exp(log_sinh(lo) - log_sinh(hi));
    }
    if (!(theta < 1.0)) {
        // omega_- < omega_+ holds whenever omega_in > 0, so this cannot fire.
        throw numeric_error("bogoliubov: mode-mixing ratio reached 1");
    }
    return bogoliubov_from_theta(theta);
}

BogoliubovData bogoliubov_from_theta(double theta) {
    require_theta(theta, "bogoliubov_from_theta");
    BogoliubovData bog;
    bog.theta = theta;
    const double one_minus_t2 = (1.0 - theta) * (1.0 + theta);
    bog.alpha_mod = 1.0 / std::sqrt(one_minus_t2);
    bog.beta_mod = theta / std::sqrt(one_minus_t2);
    bog.r = std::atanh(theta);  // same number as acosh |alpha|, stable near 0
    bog.mean_particles = theta * theta / one_minus_t2;
    return bog;
}

BogoliubovModuli bogoliubov_moduli_via_gamma(const ModeSpec& mode, const ExpansionModel& model) {
    if (mode.omega_minus <= 0.0) {
        return BogoliubovModuli{1.0, 0.0};
    }
    const double s = model.sigma_rate;
    // The reflection identities |Gamma(ix)|^2 = pi / (x sinh pi x) and
    // |Gamma(1+ix)|^2 = pi x / sinh(pi x) collapse the coefficient moduli to
    //   |alpha|^2 = sinh^2(pi a_+) / (sinh(pi a_in) sinh(pi a_out)),
    //   |beta|^2  = sinh^2(pi a_-) / (sinh(pi a_in) sinh(pi a_out)),
    // with a_x = omega_x / sigma. Through log sinh x = x + c(x) - log 2,
    // c(x) = log(1 - e^{-2x}), the linear parts cancel exactly
    // (2 a_+ = a_in + a_out, 2 a_- = a_out - a_in), so only the bounded
    // c-terms enter the floating-point sum.
    auto c = [](double x) { return std::log(-std::expm1(-2.0 * x)); };
    const double c_in = c(kPi * mode.omega_in / s);
    const double c_out = c(kPi * mode.omega_out / s);
    const double log_alpha_sq = 2.0 * c(kPi * mode.omega_plus / s) - c_in - c_out;
    const double log_beta_sq =
        -2.0 * kPi * mode.omega_in / s + 2.0 * c(kPi * mode.omega_minus / s) - c_in - c_out;
    return BogoliubovModuli{std::exp(log_alpha_sq), std::exp(log_beta_sq)};
}

std::vector<double> fock_amplitudes(double theta, int n_max) {
    require_theta(theta, "fock_amplitudes");
    if (n_max < 0) {
        throw std::invalid_argument("fock_amplitudes: n_max must be >= 0");
    }
    std::vector<double> amps(static_cast<size_t>(n_max) + 1);
    const double norm = std::sqrt((1.0 - theta) * (1.0 + theta));
    double power = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        amps[static_cast<size_t>(n)] = norm * power;
        power *= theta;
    }
    return amps;
}

SymplecticTransform squeeze_transform(double theta) {
    require_theta(theta, "squeeze_transform");
    const double scale = 1.0 / std::sqrt((1.0 - theta) * (1.0 + theta));
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(4, 4);
    s.block<2, 2>(0, 0) = scale * Eigen::Matrix2d::Identity();
    s.block<2, 2>(2, 2) = scale * Eigen::Matrix2d::Identity();
    s.block<2, 2>(0, 2) = scale * theta * pauli_z();
    s.block<2, 2>(2, 0) = scale * theta * pauli_z();
    return SymplecticTransform(std::move(s));
}

InitialState::InitialState(double s_) : s(s_) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
        throw std::invalid_argument("InitialState: squeezing must be >= 0");
    }
}

CovarianceMatrix in_state(const InitialState& init) {
    const double ch = std::cosh(2.0 * init.s);
    const double sh = std::sinh(2.0 * init.s);
    return CovarianceMatrix(two_mode_blocks(ch, ch, sh * pauli_z()));
}

CovarianceMatrix out_state(const InitialState& init, const BogoliubovData& bog) {
    return out_state(init, bog, bog);
}

CovarianceMatrix out_state(const InitialState& init, const BogoliubovData& bog_a,
                           const BogoliubovData& bog_b) {
    // Input order (A, B, Abar, Bbar); reorder to canonical (A, Abar, B, Bbar)
    // before squeezing each (mode, antimode) pair.
    const CovarianceMatrix seeded = direct_sum(in_state(init), CovarianceMatrix::vacuum(2));
    const SymplecticTransform reorder = SymplecticTransform::mode_permutation({0, 2, 1, 3});
    const SymplecticTransform channel =
        direct_sum(squeeze_transform(bog_a.theta), squeeze_transform(bog_b.theta));
    return apply(channel, apply(reorder, seeded));
}

CovarianceMatrix reduced_ab(double s, double theta) {
    require_theta(theta, "reduced_ab");
    const double c = 1.0 / ((1.0 - theta) * (1.0 + theta));
    const double ch = std::cosh(2.0 * s);
    const double sh = std::sinh(2.0 * s);
    return CovarianceMatrix(
        two_mode_blocks(c * (ch + theta * theta), c * (ch + theta * theta), c * sh * pauli_z()));
}

CovarianceMatrix reduced_abar_bbar(double s, double theta) {
    require_theta(theta, "reduced_abar_bbar");
    const double t2 = theta * theta;
    const double c = 1.0 / (1.0 - t2);
    const double ch = std::cosh(2.0 * s);
    const double sh = std::sinh(2.0 * s);
    return CovarianceMatrix(
        two_mode_blocks(c * (t2 * ch + 1.0), c * (t2 * ch + 1.0), c * t2 * sh * pauli_z()));
}

CovarianceMatrix reduced_a_bbar(double s, double theta) {
    require_theta(theta, "reduced_a_bbar");
    const double t2 = theta * theta;
    const double c = 1.0 / (1.0 - t2);
    const double ch = std::cosh(2.0 * s);
    const double sh = std::sinh(2.0 * s);
    return CovarianceMatrix(two_mode_blocks(c * (ch + t2), c * (t2 * ch + 1.0),
                                            c * theta * sh * Eigen::Matrix2d::Identity()));
}

CovarianceMatrix reduced_a_abar(double s, double theta) {
    require_theta(theta, "reduced_a_abar");
    const double t2 = theta * theta;
    const double c = 1.0 / (1.0 - t2);
    const double ch = std::cosh(2.0 * s);
    const double csq = std::cosh(s) * std::cosh(s);
    return CovarianceMatrix(
        two_mode_blocks(c * (ch + t2), c * (t2 * ch + 1.0), c * 2.0 * theta * csq * pauli_z()));
}

}  // namespace expanse
