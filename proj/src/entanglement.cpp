#include "expanse/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "expanse/nelder_mead.hpp"

namespace expanse {

namespace {

using Eigen::Matrix2d;
using Eigen::Matrix4d;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Matrix2d rotation2(double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    Matrix2d r;
    r << c, s, -s, c;
    return r;
}

Matrix2d squeeze2(double z) {
    Matrix2d m = Matrix2d::Zero();
    m(0, 0) = std::exp(z);
    m(1, 1) = std::exp(-z);
    return m;
}

Matrix2d local_symplectic(double phi1, double z, double phi2) {
    return rotation2(phi1) * squeeze2(z) * rotation2(phi2);
}

Matrix4d tmsv_cm(double r) {
    const double ch = std::cosh(2.0 * r);
    const double sh = std::sinh(2.0 * r);
    Matrix4d m = Matrix4d::Zero();
    m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = ch;
    m(0, 2) = m(2, 0) = sh;
    m(1, 3) = m(3, 1) = -sh;
    return m;
}

/// Pure two-mode candidate from 7 parameters (r, a1, za, a2, b1, zb, b2):
/// local symplectics acting on a two-mode squeezed vacuum.
Matrix4d candidate_gamma(const VectorXd& p) {
    Matrix4d local = Matrix4d::Zero();
    local.block<2, 2>(0, 0) = local_symplectic(p[1], p[2], p[3]);
    local.block<2, 2>(2, 2) = local_symplectic(p[4], p[5], p[6]);
    return local * tmsv_cm(std::abs(p[0])) * local.transpose();
}

/// -min eig(sigma - gamma), floored at 0: the feasibility violation.
double violation(const Matrix4d& sigma, const Matrix4d& gamma) {
    Eigen::SelfAdjointEigenSolver<Matrix4d> es(sigma - gamma, Eigen::EigenvaluesOnly);
    return std::max(0.0, -es.eigenvalues().minCoeff());
}

double half_log_det_a(const Matrix4d& gamma) {
    const double det = gamma(0, 0) * gamma(1, 1) - gamma(0, 1) * gamma(1, 0);
    if (!(det > 0.0)) {
        return std::numeric_limits<double>::max();
    }
    return 0.5 * std::log(det);
}

double halton(int index, int base) {
    double f = 1.0;
    double value = 0.0;
    while (index > 0) {
        f /= base;
        value += f * (index % base);
        index /= base;
    }
    return value;
}

Matrix4d symmetric_sqrt(const Matrix4d& m) {
    Eigen::SelfAdjointEigenSolver<Matrix4d> es(m);
    return es.eigenvectors() *
           es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
}

/// gamma_w = sigma^{1/2} (-K^2)^{-1/2} sigma^{1/2} with K = sigma^{1/2} Omega sigma^{1/2}:
/// the pure state sharing sigma's Williamson basis, always dominated by sigma.
Matrix4d williamson_pure_part(const Matrix4d& sigma) {
    const Matrix4d sq = symmetric_sqrt(sigma);
    Matrix4d omega = Matrix4d::Zero();
    omega(0, 1) = omega(2, 3) = 1.0;
    omega(1, 0) = omega(3, 2) = -1.0;
    const Matrix4d k = sq * omega * sq;
    Matrix4d m2 = -k * k;
    m2 = 0.5 * (m2 + m2.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix4d> es(m2);
    const Matrix4d abs_k_inv = es.eigenvectors() *
                               es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse().asDiagonal() *
                               es.eigenvectors().transpose();
    Matrix4d gamma = sq * abs_k_inv * sq;
    return 0.5 * (gamma + gamma.transpose()).eval();
}

struct EulerAngles {
    double phi1, z, phi2;
};

/// L = R(phi1) diag(e^z, e^-z) R(phi2) for a 2x2 symplectic (det = 1) matrix,
/// via a sign-corrected SVD.
EulerAngles euler_decompose(const Matrix2d& l) {
    Eigen::JacobiSVD<Matrix2d> svd(l, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix2d u = svd.matrixU();
    Matrix2d v = svd.matrixV();
    const double du = u.determinant() < 0 ? -1.0 : 1.0;
    const double dv = v.determinant() < 0 ? -1.0 : 1.0;
    u.col(1) *= du;
    v.col(1) *= dv;
    EulerAngles out;
    out.phi1 = std::atan2(u(0, 1), u(0, 0));
    out.z = std::log(std::max(svd.singularValues()[0], 1e-300));
    const Matrix2d vt = v.transpose();
    out.phi2 = std::atan2(vt(0, 1), vt(0, 0));
    return out;
}

/// Parameters reproducing a (near-)pure two-mode CM, or false when the
/// reconstruction misses (e.g. the input is far from pure).
bool extract_pure_params(const Matrix4d& gamma, VectorXd& out) {
    const Matrix2d a = gamma.block<2, 2>(0, 0);
    const Matrix2d b = gamma.block<2, 2>(2, 2);
    const Matrix2d c = gamma.block<2, 2>(0, 2);
    const double det_a = a.determinant();
    const double det_b = b.determinant();
    if (!(det_a > 0.0) || !(det_b > 0.0)) {
        return false;
    }
    auto block_symplectic = [](const Matrix2d& m, double det) {
        Eigen::SelfAdjointEigenSolver<Matrix2d> es(m);
        const Matrix2d sqrt_m = es.eigenvectors() *
                                es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                                es.eigenvectors().transpose();
        return Matrix2d(sqrt_m / std::pow(det, 0.25));
    };
    const Matrix2d sa = block_symplectic(a, det_a);
    const Matrix2d sb = block_symplectic(b, det_b);
    const Matrix2d cp = sa.inverse() * c * sb.inverse();

    Eigen::JacobiSVD<Matrix2d> svd(cp, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix2d u = svd.matrixU();
    Matrix2d v = svd.matrixV();
    const double du = u.determinant() < 0 ? -1.0 : 1.0;
    const double dv = v.determinant() < 0 ? -1.0 : 1.0;
    u.col(1) *= du;
    v.col(1) *= dv;
    const double d00 = svd.singularValues()[0];
    const double d11 = svd.singularValues()[1] * du * dv;
    const double r = 0.5 * std::asinh(std::max(0.0, 0.5 * (d00 - d11)));

    const EulerAngles ea = euler_decompose(sa * u);
    const EulerAngles eb = euler_decompose(sb * v);
    out.resize(7);
    out << r, ea.phi1, ea.z, ea.phi2, eb.phi1, eb.z, eb.phi2;

    const double scale = std::max(1.0, gamma.cwiseAbs().maxCoeff());
    return (candidate_gamma(out) - gamma).cwiseAbs().maxCoeff() <= 1e-8 * scale;
}

void check_partition(const ModePartition& partition, int n_modes, const char* who) {
    if (partition.party_modes.empty() ||
        static_cast<int>(partition.party_modes.size()) >= n_modes) {
        throw std::invalid_argument(std::string(who) + ": partition must be a strict non-empty subset");
    }
    std::vector<bool> seen(static_cast<size_t>(n_modes), false);
    for (int mode : partition.party_modes) {
        if (mode < 0 || mode >= n_modes || seen[static_cast<size_t>(mode)]) {
            throw std::invalid_argument(std::string(who) + ": invalid mode index in partition");
        }
        seen[static_cast<size_t>(mode)] = true;
    }
}

/// Everything full_report and residual_entanglement share.
struct ReportCore {
    double e_ab;
    bool e_ab_clamped;
    double e_a_abar;
    double e_a_rest;
    double e_abar_rest;
    double residual;
};

ReportCore compute_core(const InitialState& init, const BogoliubovData& bog) {
    const double s = init.s;
    const double theta = bog.theta;

    const CovarianceMatrix out = out_state(init, bog);
    ReportCore core;
    core.e_a_rest = one_to_three_entanglement(out, ModePartition{{modes::a}});
    core.e_abar_rest = one_to_three_entanglement(out, ModePartition{{modes::abar}});
    const ClampedValue ab = entanglement_ab_closed_checked(s, theta);
    core.e_ab = ab.value;
    core.e_ab_clamped = ab.clamped;
    core.e_a_abar = entanglement_a_abar_closed(theta);

    if (!is_ppt_separable(reduced_a_bbar(s, theta))) {
        throw numeric_error("entanglement report: (A,Bbar) reduction failed its separability witness");
    }
    if (!is_ppt_separable(reduced_abar_bbar(s, theta))) {
        throw numeric_error("entanglement report: (Abar,Bbar) reduction failed its separability witness");
    }

    const double slack_a = core.e_a_rest - core.e_ab - core.e_a_abar;
    const double slack_abar = core.e_abar_rest - core.e_a_abar;

    // The Abar-probe slack has a closed form; disagreement means the matrix
    // pipeline and the closed forms have diverged.
    const double t2 = theta * theta;
    const double closed_residual = std::log1p(t2 * std::cosh(2.0 * s)) - std::log1p(t2);
    if (std::abs(slack_abar - closed_residual) > 1e-9 * std::max(1.0, std::abs(closed_residual))) {
        std::ostringstream os;
        os << "entanglement report: Abar-probe slack " << slack_abar
           << " deviates from its closed form " << closed_residual;
        throw numeric_error(os.str());
    }

    for (const auto& [value, name] :
         {std::pair<double, const char*>{slack_a, "A-probe monogamy slack"},
          std::pair<double, const char*>{slack_abar, "Abar-probe monogamy slack"}}) {
        if (value < -1e-9) {
            std::ostringstream os;
            os << "entanglement report: " << name << " is negative (" << value << ")";
            throw numeric_error(os.str());
        }
    }
    core.residual = std::max(0.0, std::min(slack_a, slack_abar));
    return core;
}

}  // namespace

double pure_bipartite_entanglement(const CovarianceMatrix& cm, const ModePartition& partition) {
    if (!cm.is_pure(1e-6)) {
        std::ostringstream os;
        os << "pure_bipartite_entanglement: state is not pure (det = " << cm.determinant()
           << "); use gaussian_renyi2_eof_numeric for mixed states";
        throw std::invalid_argument(os.str());
    }
    check_partition(partition, cm.n_modes(), "pure_bipartite_entanglement");
    return renyi2_entropy(partial_trace(cm, partition.party_modes));
}

ClampedValue entanglement_ab_closed_checked(double s, double theta) {
    if (!(theta >= 0.0 && theta < 1.0)) {
        throw std::invalid_argument("entanglement_ab_closed: theta must lie in [0, 1)");
    }
    if (!(s >= 0.0)) {
        throw std::invalid_argument("entanglement_ab_closed: s must be >= 0");
    }
    const double t2 = theta * theta;
    const double ch = std::cosh(2.0 * s);
    const double sh = std::sinh(2.0 * s);
    const double numerator = -(ch * (t2 * t2 - t2 + 1.0) + t2 * (sh * (t2 - 1.0) + 1.0));
    const double denominator =
        (t2 - 1.0) * std::exp(s) * (std::cosh(s) * (t2 + 1.0) + std::sinh(s) * (t2 - 1.0));
    const double raw = std::log(numerator / denominator);

    if (is_ppt_separable(reduced_ab(s, theta))) {
        return ClampedValue{0.0, raw > 0.0};
    }
    return ClampedValue{std::max(0.0, raw), false};
}

double entanglement_ab_closed(double s, double theta) {
    return entanglement_ab_closed_checked(s, theta).value;
}

double entanglement_a_abar_closed(double theta) {
    if (!(theta >= 0.0 && theta < 1.0)) {
        throw std::invalid_argument("entanglement_a_abar_closed: theta must lie in [0, 1)");
    }
    const double t2 = theta * theta;
    return std::log1p(t2) - std::log1p(-t2);
}

double one_to_three_entanglement(const CovarianceMatrix& cm4, const ModePartition& probe) {
    if (cm4.n_modes() != 4) {
        throw dimension_error("one_to_three_entanglement: expected a four-mode state");
    }
    if (probe.party_modes.size() != 1) {
        throw std::invalid_argument("one_to_three_entanglement: probe must be a single mode");
    }
    return pure_bipartite_entanglement(cm4, probe);
}

bool is_ppt_separable(const CovarianceMatrix& cm2) {
    if (cm2.n_modes() != 2) {
        throw dimension_error("is_ppt_separable: expected a two-mode state");
    }
    const Eigen::MatrixXd pt = partial_transpose(cm2, ModePartition{{1}});
    const std::vector<double> nu = symplectic_eigenvalues(pt);
    return nu.back() >= 1.0 - kPhysicalityTol;
}

EofResult gaussian_renyi2_eof_numeric(const CovarianceMatrix& cm2, const EofOptions& opts) {
    if (cm2.n_modes() != 2) {
        throw dimension_error("gaussian_renyi2_eof_numeric: expected a two-mode state");
    }
    EofResult result;
    if (opts.ppt_shortcut && is_ppt_separable(cm2)) {
        result.value = 0.0;
        result.converged = true;
        result.via_ppt = true;
        return result;
    }

    const Matrix4d sigma = cm2.data();
    const Matrix4d gamma_w = williamson_pure_part(sigma);
    VectorXd anchor;
    const bool have_anchor =
        extract_pure_params(gamma_w, anchor) && violation(sigma, candidate_gamma(anchor)) <= opts.feasibility_tol;

    long evals = 0;
    double best_value = std::numeric_limits<double>::infinity();
    double best_violation = std::numeric_limits<double>::infinity();
    double best_bound = std::numeric_limits<double>::infinity();

    auto consider = [&](const VectorXd& p) {
        const Matrix4d gamma = candidate_gamma(p);
        const double viol = violation(sigma, gamma);
        const double value = half_log_det_a(gamma);
        ++evals;
        if (viol <= opts.feasibility_tol && value < best_value) {
            best_value = value;
            best_violation = viol;
        }
        if (value < best_bound) {
            best_bound = value;
        }
    };

    auto pull_back = [&](const VectorXd& p) {
        if (!have_anchor) {
            return p;
        }
        if (violation(sigma, candidate_gamma(p)) <= 1e-12) {
            ++evals;
            return p;
        }
        const double target = std::max(1e-12, 2.0 * violation(sigma, candidate_gamma(anchor)));
        double lo = 0.0;
        double hi = 1.0;
        for (int i = 0; i < 50; ++i) {
            const double mid = 0.5 * (lo + hi);
            const VectorXd probe = p + mid * (anchor - p);
            ++evals;
            if (violation(sigma, candidate_gamma(probe)) <= target) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        return VectorXd(p + hi * (anchor - p));
    };

    if (have_anchor) {
        consider(anchor);
    }

    const double max_diag = std::max(1.0, sigma.diagonal().maxCoeff());
    const double r_max = 0.5 * std::acosh(max_diag) + 0.7;
    constexpr int kBases[7] = {2, 3, 5, 7, 11, 13, 17};

    for (int start = 0; start < opts.starts; ++start) {
        VectorXd x(7);
        if (start == 0 && have_anchor) {
            x = anchor;
        } else {
            for (int j = 0; j < 7; ++j) {
                const double u = halton(start + 1, kBases[j]);
                if (j == 0) {
                    x[j] = u * r_max;
                } else if (j == 2 || j == 5) {
                    x[j] = (2.0 * u - 1.0) * 0.9;
                } else {
                    x[j] = (2.0 * u - 1.0) * std::numbers::pi;
                }
            }
        }

        double lambda = opts.lambda0;
        double previous = std::numeric_limits<double>::infinity();
        for (int stage = 0; stage < opts.escalations; ++stage) {
            auto penalized = [&](const VectorXd& p) {
                const Matrix4d gamma = candidate_gamma(p);
                const double viol = violation(sigma, gamma);
                return half_log_det_a(gamma) + lambda * viol * viol;
            };
            NelderMeadOptions nm;
            nm.max_iterations = opts.max_iterations;
            const NelderMeadResult sol = nelder_mead(penalized, x, nm);
            evals += sol.evaluations;
            x = sol.x;
            lambda *= 10.0;
            const double viol_now = violation(sigma, candidate_gamma(x));
            ++evals;
            if (viol_now <= 1e-13 && std::abs(previous - sol.fx) < 1e-13) {
                break;
            }
            previous = sol.fx;
        }
        consider(pull_back(x));
    }

    result.evaluations = evals;
    if (std::isfinite(best_value)) {
        result.value = std::max(0.0, best_value);
        result.converged = true;
        result.feasibility_violation = best_violation;
    } else {
        // No feasible candidate: report the best (infeasible) bound, flagged.
        result.value = std::isfinite(best_bound) ? std::max(0.0, best_bound) : 0.0;
        result.converged = false;
        result.feasibility_violation = best_violation;
    }
    return result;
}

double residual_entanglement(const InitialState& init, const BogoliubovData& bog) {
    return compute_core(init, bog).residual;
}

EntanglementReport full_report(const InitialState& init, const BogoliubovData& bog) {
    const ReportCore core = compute_core(init, bog);
    EntanglementReport report;
    report.e_ab = core.e_ab;
    report.e_ab_clamped = core.e_ab_clamped;
    report.e_abar_bbar = 0.0;
    report.e_a_bbar = 0.0;
    report.e_a_abar = core.e_a_abar;
    report.e_a_rest = core.e_a_rest;
    report.e_abar_rest = core.e_abar_rest;
    report.residual = core.residual;
    report.s = init.s;
    report.theta = bog.theta;
    report.k = std::numeric_limits<double>::quiet_NaN();
    report.m = std::numeric_limits<double>::quiet_NaN();
    report.epsilon = std::numeric_limits<double>::quiet_NaN();
    report.sigma_rate = std::numeric_limits<double>::quiet_NaN();
    return report;
}

EntanglementReport full_report(const InitialState& init, double k, const ExpansionModel& model) {
    const BogoliubovData bog = bogoliubov(frequencies(k, model), model);
    EntanglementReport report = full_report(init, bog);
    report.k = k;
    report.m = model.mass;
    report.epsilon = model.epsilon;
    report.sigma_rate = model.sigma_rate;
    return report;
}

}  // namespace expanse
