#include "gfss/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gfss/errors.hpp"

namespace gfss {

namespace {

// Flip column signs so the first entry with |entry| > 1e-9 is positive.
void normalize_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double v = vectors(r, c);
      if (std::abs(v) > 1e-9) {
        if (v < 0.0) vectors.col(c) = -vectors.col(c);
        break;
      }
    }
  }
}

}  // namespace

Spectrum::Spectrum(unchecked_t, Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors)
    : eigenvalues_(std::move(eigenvalues)), eigenvectors_(std::move(eigenvectors)) {}

Spectrum::Spectrum(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors)
    : eigenvalues_(std::move(eigenvalues)), eigenvectors_(std::move(eigenvectors)) {
  const Eigen::Index p = eigenvalues_.size();
  if (p < 1) throw std::invalid_argument("Spectrum: empty eigenvalue list");
  if (eigenvectors_.rows() != p || eigenvectors_.cols() != p)
    throw std::invalid_argument("Spectrum: eigenvector matrix must be p x p");
  const double scale = std::max(1.0, std::abs(eigenvalues_[p - 1]));
  if (std::abs(eigenvalues_[0]) > 1e-8 * scale)
    throw std::invalid_argument("Spectrum: leading eigenvalue must be zero");
  eigenvalues_[0] = 0.0;
  for (Eigen::Index i = 1; i < p; ++i) {
    if (eigenvalues_[i] < eigenvalues_[i - 1])
      throw std::invalid_argument("Spectrum: eigenvalues must be ascending");
  }
  const Eigen::MatrixXd gram = eigenvectors_.transpose() * eigenvectors_;
  const double ortho_err = (gram - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff();
  if (ortho_err > 1e-8)
    throw std::invalid_argument("Spectrum: eigenvectors not orthonormal (max deviation " +
                                std::to_string(ortho_err) + ")");
  normalize_signs(eigenvectors_);
}

bool Spectrum::connected() const {
  if (size() < 2) return true;
  return eigenvalues_[1] > 1e-8 * std::max(1.0, lambda_max());
}

Spectrum eigendecompose(const Eigen::MatrixXd& laplacian) {
  const Eigen::Index p = laplacian.rows();
  if (p < 1 || laplacian.cols() != p)
    throw std::invalid_argument("eigendecompose: matrix must be square and non-empty");
  const double scale = std::max(1.0, laplacian.cwiseAbs().maxCoeff());
  const double asym = (laplacian - laplacian.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale)
    throw std::invalid_argument("eigendecompose: matrix not symmetric (max asymmetry " +
                                std::to_string(asym) + ")");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success)
    throw EigensolverError("eigendecompose: eigensolver failed to converge");

  Eigen::VectorXd values = solver.eigenvalues();
  Eigen::MatrixXd vectors = solver.eigenvectors();
  // A valid Laplacian of a connected graph has exactly one zero eigenvalue;
  // downstream formulas divide by lambda_i only for i >= 2.
  values[0] = 0.0;
  normalize_signs(vectors);
  return Spectrum(Spectrum::unchecked_t{}, std::move(values), std::move(vectors));
}

std::vector<double> torus_spectrum(int side) {
  if (side < 3) throw std::invalid_argument("torus_spectrum: side must be >= 3");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(side) * side);
  const double step = 2.0 * std::numbers::pi / side;
  for (int i1 = 0; i1 < side; ++i1) {
    for (int i2 = 0; i2 < side; ++i2) {
      out.push_back(2.0 * (2.0 - std::cos(step * i1) - std::cos(step * i2)));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> kronecker_spectrum(const std::vector<double>& base_eigenvalues, int levels) {
  const int p0 = static_cast<int>(base_eigenvalues.size());
  if (p0 < 2) throw std::invalid_argument("kronecker_spectrum: need >= 2 base eigenvalues");
  if (levels < 1) throw std::invalid_argument("kronecker_spectrum: levels must be >= 1");
  if (std::abs(base_eigenvalues[0]) > 1e-10)
    throw std::invalid_argument("kronecker_spectrum: base spectrum must start at 0");
  if (!(base_eigenvalues[1] > 0.0))
    throw std::invalid_argument("kronecker_spectrum: base must be connected (nu_2 > 0)");
  if (!std::is_sorted(base_eigenvalues.begin(), base_eigenvalues.end()))
    throw std::invalid_argument("kronecker_spectrum: base eigenvalues must be ascending");

  // lambda = sum over coordinates j of p0^(j-levels) * nu_{i_j}
  std::vector<double> sums{0.0};
  for (int j = 1; j <= levels; ++j) {
    const double scale = std::pow(static_cast<double>(p0), j - levels);
    std::vector<double> next;
    next.reserve(sums.size() * p0);
    for (double s : sums) {
      for (double nu : base_eigenvalues) next.push_back(s + scale * nu);
    }
    sums = std::move(next);
  }
  std::sort(sums.begin(), sums.end());
  return sums;
}

namespace {

double spectral_sum(const Spectrum& spec, double rho, bool squared) {
  if (!(rho > 0.0)) throw std::invalid_argument("spectral sum: rho must be positive");
  if (!spec.connected()) throw std::invalid_argument("spectral sum: spectrum must be connected");
  double total = 0.0;
  for (int i = 1; i < spec.size(); ++i) {
    const double ratio = rho / spec.eigenvalue(i);
    const double term = squared ? ratio * ratio : ratio;
    total += std::min(1.0, term);
  }
  return total;
}

}  // namespace

double spectral_sum_s1(const Spectrum& spec, double rho) { return spectral_sum(spec, rho, false); }

double spectral_sum_s2(const Spectrum& spec, double rho) { return spectral_sum(spec, rho, true); }

}  // namespace gfss
