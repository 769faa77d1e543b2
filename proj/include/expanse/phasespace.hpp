#pragma once

#include <Eigen/Dense>
#include <vector>

#include "expanse/errors.hpp"

// Phase-space algebra for n-mode Gaussian states. Quadrature ordering is
// (X1, P1, ..., Xn, Pn) throughout; the vacuum covariance matrix is the
// identity and physical states have all symplectic eigenvalues >= 1.

namespace expanse {

/// Tolerance below which a symplectic eigenvalue counts as unphysical.
inline constexpr double kPhysicalityTol = 1e-9;
/// Tolerance for the symplectic-condition check S Omega S^T = Omega.
inline constexpr double kSymplecticTol = 1e-10;

/// The symplectic form on n modes as a plain matrix: 2x2 blocks [[0,1],[-1,0]].
Eigen::MatrixXd omega_matrix(int n_modes);

/// Covariance matrix of an n-mode Gaussian state (first moments are zero).
/// Construction symmetrizes the input, then enforces physicality.
class CovarianceMatrix {
public:
    explicit CovarianceMatrix(Eigen::MatrixXd data);

    static CovarianceMatrix vacuum(int n_modes);

    int n_modes() const { return n_modes_; }
    int dim() const { return 2 * n_modes_; }
    const Eigen::MatrixXd& data() const { return data_; }

    double determinant() const;
    bool is_pure(double tol = 1e-6) const;

private:
    int n_modes_;
    Eigen::MatrixXd data_;
};

/// Linear phase-space map with S Omega S^T = Omega; the image of a Gaussian
/// unitary. Construction validates the symplectic condition.
class SymplecticTransform {
public:
    explicit SymplecticTransform(Eigen::MatrixXd data);

    static SymplecticTransform identity(int n_modes);
    /// Permutation of modes: output mode j is input mode source_of[j].
    static SymplecticTransform mode_permutation(const std::vector<int>& source_of);

    int n_modes() const { return n_modes_; }
    int dim() const { return 2 * n_modes_; }
    const Eigen::MatrixXd& data() const { return data_; }

private:
    int n_modes_;
    Eigen::MatrixXd data_;
};

/// One side of a bipartition, as a list of mode indices.
struct ModePartition {
    std::vector<int> party_modes;
};

/// The symplectic form itself (it satisfies its own defining condition).
SymplecticTransform symplectic_form(int n_modes);

/// Symplectic eigenvalues of a (not necessarily physical) symmetric matrix,
/// descending. Computed from the eigenvalue moduli of Omega*sigma, which come
/// in +/- i nu pairs.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cm_data);
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& cm);

/// Congruence S sigma S^T.
CovarianceMatrix apply(const SymplecticTransform& s, const CovarianceMatrix& cm);

CovarianceMatrix direct_sum(const CovarianceMatrix& a, const CovarianceMatrix& b);
SymplecticTransform direct_sum(const SymplecticTransform& a, const SymplecticTransform& b);

/// Discards all modes not in `keep`; result modes appear in the order given.
CovarianceMatrix partial_trace(const CovarianceMatrix& cm, const std::vector<int>& keep);

/// Momentum-sign flip P sigma P on the party's modes. The result may violate
/// physicality; that is the separability signal, so it is returned raw.
Eigen::MatrixXd partial_transpose(const CovarianceMatrix& cm, const ModePartition& party);

/// Renyi-2 entropy (1/2) ln det sigma, in nats. Zero iff pure.
double renyi2_entropy(const CovarianceMatrix& cm);

}  // namespace expanse
