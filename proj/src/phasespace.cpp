#include "expanse/phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace expanse {

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* who) {
    if (!m.allFinite()) {
        throw numeric_error(std::string(who) + ": non-finite entries");
    }
}

void require_even_square(const Eigen::MatrixXd& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() < 2 || m.rows() % 2 != 0) {
        std::ostringstream os;
        os << who << ": expected 2n x 2n matrix, got " << m.rows() << " x " << m.cols();
        throw dimension_error(os.str());
    }
}

}  // namespace

Eigen::MatrixXd omega_matrix(int n_modes) {
    if (n_modes < 1) {
        throw dimension_error("omega_matrix: mode count must be >= 1");
    }
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int i = 0; i < n_modes; ++i) {
        omega(2 * i, 2 * i + 1) = 1.0;
        omega(2 * i + 1, 2 * i) = -1.0;
    }
    return omega;
}

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd data) {
    require_even_square(data, "CovarianceMatrix");
    require_finite(data, "CovarianceMatrix");
    n_modes_ = static_cast<int>(data.rows()) / 2;
    // Symmetrize first: congruences leave floating-point asymmetry behind.
    data_ = 0.5 * (data + data.transpose());

    const std::vector<double> nu = symplectic_eigenvalues(data_);
    if (nu.back() < 1.0 - kPhysicalityTol) {
        std::ostringstream os;
        os << "CovarianceMatrix: unphysical state, min symplectic eigenvalue " << nu.back();
        throw physicality_error(os.str());
    }
    if (determinant() < 1.0 - kPhysicalityTol) {
        std::ostringstream os;
        os << "CovarianceMatrix: det " << determinant() << " below 1";
        throw physicality_error(os.str());
    }
}

CovarianceMatrix CovarianceMatrix::vacuum(int n_modes) {
    if (n_modes < 1) {
        throw dimension_error("vacuum: mode count must be >= 1");
    }
    return CovarianceMatrix(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

double CovarianceMatrix::determinant() const {
    return data_.determinant();
}

bool CovarianceMatrix::is_pure(double tol) const {
    return std::abs(determinant() - 1.0) <= tol;
}

SymplecticTransform::SymplecticTransform(Eigen::MatrixXd data) {
    require_even_square(data, "SymplecticTransform");
    require_finite(data, "SymplecticTransform");
    n_modes_ = static_cast<int>(data.rows()) / 2;
    const Eigen::MatrixXd omega = omega_matrix(n_modes_);
    const double err = (data * omega * data.transpose() - omega).cwiseAbs().maxCoeff();
    if (err > kSymplecticTol * std::max(1.0, data.cwiseAbs().maxCoeff())) {
        std::ostringstream os;
        os << "SymplecticTransform: S Omega S^T deviates from Omega by " << err;
        throw numeric_error(os.str());
    }
    data_ = std::move(data);
}

SymplecticTransform SymplecticTransform::identity(int n_modes) {
    if (n_modes < 1) {
        throw dimension_error("identity: mode count must be >= 1");
    }
    return SymplecticTransform(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

SymplecticTransform SymplecticTransform::mode_permutation(const std::vector<int>& source_of) {
    const int n = static_cast<int>(source_of.size());
    if (n < 1) {
        throw dimension_error("mode_permutation: empty permutation");
    }
    std::vector<bool> seen(n, false);
    for (int src : source_of) {
        if (src < 0 || src >= n || seen[src]) {
            throw std::invalid_argument("mode_permutation: not a permutation of 0..n-1");
        }
        seen[src] = true;
    }
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        p(2 * j, 2 * source_of[j]) = 1.0;
        p(2 * j + 1, 2 * source_of[j] + 1) = 1.0;
    }
    return SymplecticTransform(p);
}

SymplecticTransform symplectic_form(int n_modes) {
    return SymplecticTransform(omega_matrix(n_modes));
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cm_data) {
    require_even_square(cm_data, "symplectic_eigenvalues");
    require_finite(cm_data, "symplectic_eigenvalues");
    const int n = static_cast<int>(cm_data.rows()) / 2;
    const Eigen::MatrixXd sym = 0.5 * (cm_data + cm_data.transpose());

    Eigen::EigenSolver<Eigen::MatrixXd> solver(omega_matrix(n) * sym, false);
    if (solver.info() != Eigen::Success) {
        throw numeric_error("symplectic_eigenvalues: eigensolver failed");
    }
    std::vector<double> moduli(2 * n);
    for (int i = 0; i < 2 * n; ++i) {
        moduli[i] = std::abs(solver.eigenvalues()[i]);
    }
    std::sort(moduli.begin(), moduli.end(), std::greater<double>());

    // Moduli must pair up as (+i nu, -i nu).
    std::vector<double> nu(n);
    for (int i = 0; i < n; ++i) {
        const double hi = moduli[2 * i];
        const double lo = moduli[2 * i + 1];
        if (hi - lo > 1e-8 * std::max(1.0, hi)) {
            throw numeric_error("symplectic_eigenvalues: unpaired eigenvalue moduli");
        }
        nu[i] = 0.5 * (hi + lo);
    }
    return nu;
}

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& cm) {
    return symplectic_eigenvalues(cm.data());
}

CovarianceMatrix apply(const SymplecticTransform& s, const CovarianceMatrix& cm) {
    if (s.dim() != cm.dim()) {
        std::ostringstream os;
        os << "apply: transform is " << s.dim() << "-dim, state is " << cm.dim() << "-dim";
        throw dimension_error(os.str());
    }
    return CovarianceMatrix(s.data() * cm.data() * s.data().transpose());
}

CovarianceMatrix direct_sum(const CovarianceMatrix& a, const CovarianceMatrix& b) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.dim() + b.dim(), a.dim() + b.dim());
    m.topLeftCorner(a.dim(), a.dim()) = a.data();
    m.bottomRightCorner(b.dim(), b.dim()) = b.data();
    return CovarianceMatrix(std::move(m));
}

SymplecticTransform direct_sum(const SymplecticTransform& a, const SymplecticTransform& b) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.dim() + b.dim(), a.dim() + b.dim());
    m.topLeftCorner(a.dim(), a.dim()) = a.data();
    m.bottomRightCorner(b.dim(), b.dim()) = b.data();
    return SymplecticTransform(std::move(m));
}

CovarianceMatrix partial_trace(const CovarianceMatrix& cm, const std::vector<int>& keep) {
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: empty keep-list");
    }
    std::vector<bool> seen(cm.n_modes(), false);
    for (int mode : keep) {
        if (mode < 0 || mode >= cm.n_modes()) {
            throw std::invalid_argument("partial_trace: mode index out of range");
        }
        if (seen[mode]) {
            throw std::invalid_argument("partial_trace: duplicate mode index");
        }
        seen[mode] = true;
    }
    const int m = static_cast<int>(keep.size());
    Eigen::MatrixXd out(2 * m, 2 * m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            out.block<2, 2>(2 * i, 2 * j) = cm.data().block<2, 2>(2 * keep[i], 2 * keep[j]);
        }
    }
    return CovarianceMatrix(std::move(out));
}

Eigen::MatrixXd partial_transpose(const CovarianceMatrix& cm, const ModePartition& party) {
    if (party.party_modes.empty() ||
        static_cast<int>(party.party_modes.size()) >= cm.n_modes()) {
        throw std::invalid_argument("partial_transpose: party must be a strict non-empty subset");
    }
    Eigen::VectorXd flip = Eigen::VectorXd::Ones(cm.dim());
    std::vector<bool> seen(cm.n_modes(), false);
    for (int mode : party.party_modes) {
        if (mode < 0 || mode >= cm.n_modes() || seen[mode]) {
            throw std::invalid_argument("partial_transpose: invalid party mode index");
        }
        seen[mode] = true;
        flip[2 * mode + 1] = -1.0;
    }
    return flip.asDiagonal() * cm.data() * flip.asDiagonal();
}

double renyi2_entropy(const CovarianceMatrix& cm) {
    const double det = cm.determinant();
    if (det < 1.0 - kPhysicalityTol) {
        std::ostringstream os;
        os << "renyi2_entropy: det " << det << " below 1";
        throw physicality_error(os.str());
    }
    return std::max(0.0, 0.5 * std::log(det));
}

}  // namespace expanse
