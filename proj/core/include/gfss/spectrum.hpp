#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gfss {

// Eigendecomposition of a combinatorial Laplacian: ascending eigenvalues with
// the zero eigenvalue stored as exactly 0, and an orthonormal eigenvector
// basis (columns). Eigenvector signs are fixed so that the first entry whose
// magnitude exceeds 1e-9 is positive. Immutable; safe to share across threads.
class Spectrum {
 public:
  // Validating constructor for externally supplied decompositions (file
  // import, tests): checks ascending order, the zero leading eigenvalue,
  // orthonormality and sign normalization.
  Spectrum(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors);

  int size() const { return static_cast<int>(eigenvalues_.size()); }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  double eigenvalue(int i) const { return eigenvalues_[i]; }
  double lambda_max() const { return eigenvalues_[size() - 1]; }
  // Column i is the eigenvector of eigenvalue i.
  const Eigen::MatrixXd& basis() const { return eigenvectors_; }

  // True when the algebraic connectivity is resolvably positive, i.e. the
  // underlying graph is connected.
  bool connected() const;

 private:
  struct unchecked_t {};
  Spectrum(unchecked_t, Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors);
  friend Spectrum eigendecompose(const Eigen::MatrixXd&);

  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

// Full dense symmetric eigendecomposition, the reference spectral path.
// Rejects matrices that are not symmetric within 1e-10 (relative to the
// largest entry); solver non-convergence surfaces as EigensolverError.
Spectrum eigendecompose(const Eigen::MatrixXd& laplacian);

// Analytic torus spectrum {2(2 - cos(2 pi i1/side) - cos(2 pi i2/side))},
// sorted ascending.
std::vector<double> torus_spectrum(int side);

// Analytic spectrum of the multi-scale Kronecker power: all sums
// sum_j p0^(j-levels) * nu_{i_j} over index tuples, sorted ascending.
// base_eigenvalues must be ascending with nu_1 = 0 and nu_2 > 0.
std::vector<double> kronecker_spectrum(const std::vector<double>& base_eigenvalues, int levels);

// sum_{i>=2} min{1, rho/lambda_i}; increasing in rho, bounded by p-1.
double spectral_sum_s1(const Spectrum& spec, double rho);

// sum_{i>=2} min{1, rho^2/lambda_i^2}.
double spectral_sum_s2(const Spectrum& spec, double rho);

}  // namespace gfss
