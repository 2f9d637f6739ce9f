#ifndef FUSION_CORE_PCA_HPP
#define FUSION_CORE_PCA_HPP

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

namespace fusion {

/// Principal components of the sample covariance (divisor n-1).
/// components rows are orthonormal eigenvectors, eigenvalues nonincreasing.
/// Deterministic sign convention: the largest-magnitude entry of each
/// component is positive (ties by lowest index). Eigenvalues below
/// 1e-12 * lambda_max are clamped to zero and flagged.
struct PcaModel {
    Eigen::VectorXd mean;                              // d
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> components; // k x d
    Eigen::VectorXd eigenvalues;                       // k, nonincreasing
    std::vector<bool> clamped;                         // k flags

    Eigen::Index dim() const { return mean.size(); }
    Eigen::Index component_count() const { return components.rows(); }
};

/// Fit on an n x d data matrix (rows are samples). Requires n >= 2 and
/// 1 <= k <= min(n-1, d); throws DegenerateInput otherwise. Dispatches to
/// the Gram route when n < d (n ~ 960 against d = 4096 makes the d x d
/// covariance wasteful; the two routes are algebraically identical).
PcaModel pca_fit(const Eigen::MatrixXd& data, int k);

/// Eigendecomposition of the d x d covariance.
PcaModel pca_fit_direct(const Eigen::MatrixXd& data, int k);

/// Eigendecomposition of the n x n Gram matrix X_c X_c^T / (n-1); the
/// covariance eigenvectors are recovered as X_c^T u / sqrt((n-1) lambda).
PcaModel pca_fit_gram(const Eigen::MatrixXd& data, int k);

/// components * (v - mean). Throws DimensionMismatch.
Eigen::VectorXd pca_project(const PcaModel& model, const Eigen::VectorXd& v);

/// mean + components^T * coords, the reconstruction partner of pca_project.
Eigen::VectorXd pca_reconstruct(const PcaModel& model, const Eigen::VectorXd& coords);

/// Persistence, header-plus-rows text with MEAN / EIGENVALUES / COMPONENTS
/// sections.
void save_pca_model(std::ostream& out, const PcaModel& model);
PcaModel load_pca_model(std::istream& in);

} // namespace fusion

#endif
