#pragma once

// Density matrices: validation, support/kernel bookkeeping, random
// generators, tensor products and partial traces.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "qtsallis/linalg.hpp"

namespace qtsallis {

inline constexpr double kTolIncl = 1e-12;
inline constexpr double kTolDensity = 1e-10;

/// Mersenne twister (a twisted generalized feedback shift register).
using Rng = std::mt19937_64;

/// Independent per-trial stream: root seed xor trial index.
inline Rng trial_stream(std::uint64_t seed, std::uint64_t trial) { return Rng(seed ^ trial); }

/// PSD, unit-trace Hermitian matrix. The spectrum is stored after
/// zero-thresholding; eigenvalues in [-tol, 0) are clamped to 0 and the
/// spectrum renormalized, in which case the matrix is rebuilt from it.
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(const Matrix& m, double tol = kTolDensity) {
    HermitianOperator h(m, std::max(tol, kTolHerm));
    const RealVector& raw = h.eigenvalues();
    const double tz = h.zero_threshold();
    if (raw(0) < -tol && raw(0) < -tz)
      throw NotPSD("eigenvalue " + detail::fmt_double(raw(0)) + " below -" + detail::fmt_double(tol));
    const double tr = h.trace().real();
    if (std::abs(tr - 1.0) > tol) throw NotNormalized("trace " + detail::fmt_double(tr) + " differs from 1");

    RealVector spec = raw;
    bool rebuilt = false;
    for (auto& x : spec) {
      if (std::abs(x) <= tz) {
        x = 0.0;
      } else if (x < 0.0) {
        x = 0.0;
        rebuilt = true;
      }
    }
    const double sum = spec.sum();
    if (std::abs(sum - 1.0) > 1e-14) {
      spec /= sum;
      rebuilt = true;
    }
    DensityMatrix rho;
    rho.vectors_ = h.eigensystem().eigenvectors;
    rho.spectrum_ = spec;
    rho.op_ = rebuilt ? HermitianOperator(from_eigensystem(rho.vectors_, spec)) : h;
    rho.rank_ = 0;
    for (double x : spec)
      if (x > 0.0) ++rho.rank_;
    return rho;
  }

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  /// Thresholded eigenvalues, ascending.
  const RealVector& spectrum() const { return spectrum_; }
  const Matrix& eigenvectors() const { return vectors_; }
  int rank() const { return rank_; }
  bool full_rank() const { return rank_ == dim(); }

  double max_eigenvalue() const { return spectrum_(dim() - 1); }
  double min_eigenvalue() const { return spectrum_(0); }
  double min_nonzero_eigenvalue() const { return spectrum_(dim() - rank_); }

  /// Projector onto the span of eigenvectors with nonzero eigenvalue.
  HermitianOperator support_projector() const {
    const auto u = vectors_.rightCols(rank_);
    return HermitianOperator(u * u.adjoint());
  }

  /// f applied to the thresholded spectrum in this state's eigenbasis.
  template <class F>
  HermitianOperator map_spectrum(F&& f) const {
    RealVector v(spectrum_.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = f(spectrum_(i));
    return HermitianOperator(from_eigensystem(vectors_, v));
  }

 private:
  DensityMatrix() : op_(Matrix::Identity(1, 1)) {}

  HermitianOperator op_;
  RealVector spectrum_;
  Matrix vectors_;
  int rank_ = 0;
};

inline DensityMatrix density_from_matrix(const Matrix& m, double tol = kTolDensity) {
  return DensityMatrix::from_matrix(m, tol);
}

inline DensityMatrix diagonal_state(std::initializer_list<double> p) {
  return DensityMatrix::from_matrix(HermitianOperator::diagonal(p).matrix());
}

inline Matrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

/// Haar unitary: QR of a Ginibre matrix with R's diagonal phases folded into Q.
inline Matrix haar_unitary(int d, Rng& rng) {
  const Matrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= mag > 0.0 ? rjj / mag : Complex(1.0);
  }
  return q;
}

/// GG^dagger / tr(GG^dagger) with G a d x rank Ginibre matrix.
inline DensityMatrix sample_density(int d, int rank, Rng& rng) {
  if (d < 1 || d > kMaxDim) throw DimensionMismatch("bad dimension " + std::to_string(d));
  if (rank < 1 || rank > d) throw DomainViolation("rank must lie in [1, d]");
  const Matrix g = ginibre(d, rank, rng);
  Matrix w = g * g.adjoint();
  w /= w.trace().real();
  return DensityMatrix::from_matrix(w);
}

inline void check_probability_spectrum(std::span<const double> spec) {
  if (spec.empty()) throw BadSpectrum("empty spectrum");
  double sum = 0.0;
  for (double x : spec) {
    if (!(x >= 0.0)) throw BadSpectrum("negative spectrum entry " + detail::fmt_double(x));
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw BadSpectrum("spectrum sums to " + detail::fmt_double(sum));
}

/// U diag(spec) U^dagger with U Haar-distributed.
inline DensityMatrix density_with_spectrum(std::span<const double> spec, Rng& rng) {
  check_probability_spectrum(spec);
  const int d = static_cast<int>(spec.size());
  RealVector v = Eigen::Map<const RealVector>(spec.data(), d);
  const Matrix u = haar_unitary(d, rng);
  return DensityMatrix::from_matrix(from_eigensystem(u, v));
}

/// U (block (+) 0) U^dagger: a rank-deficient state with an exactly known kernel.
inline DensityMatrix embed_state(const DensityMatrix& block, const Matrix& unitary) {
  const int d = static_cast<int>(unitary.rows());
  const int k = block.dim();
  if (k > d) throw DimensionMismatch("block larger than target dimension");
  Matrix full = Matrix::Zero(d, d);
  full.topLeftCorner(k, k) = block.matrix();
  return DensityMatrix::from_matrix(unitary * full * unitary.adjoint());
}

/// Weight of rho on ker(sigma), i.e. tr((1 - P_supp(sigma)) rho).
inline double kernel_weight(const DensityMatrix& sigma, const DensityMatrix& rho) {
  HermitianOperator::check_same_dim(sigma.op(), rho.op());
  const int nker = sigma.dim() - sigma.rank();
  double w = 0.0;
  for (int i = 0; i < nker; ++i) {
    const auto v = sigma.eigenvectors().col(i);
    w += (v.adjoint() * rho.matrix() * v)(0, 0).real();
  }
  return w;
}

/// ker(sigma) within ker(rho), up to `tol` weight of rho on ker(sigma).
inline bool kernel_included(const DensityMatrix& sigma, const DensityMatrix& rho, double tol = kTolIncl) {
  return kernel_weight(sigma, rho) <= tol;
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const int da = a.dim();
  const int db = b.dim();
  Matrix k(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) k.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  return DensityMatrix::from_matrix(k);
}

enum class Subsystem { A, B };

/// Partial trace of a state on C^dA (x) C^dB, keeping `keep`.
inline DensityMatrix partial_trace(const DensityMatrix& rho, int dim_a, int dim_b, Subsystem keep) {
  if (dim_a < 1 || dim_b < 1 || dim_a * dim_b != rho.dim())
    throw BadFactorization("dimension " + std::to_string(rho.dim()) + " is not " + std::to_string(dim_a) + "*" +
                           std::to_string(dim_b));
  const Matrix& m = rho.matrix();
  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j)
        for (int k = 0; k < dim_b; ++k) out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return DensityMatrix::from_matrix(out);
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (int i = 0; i < dim_b; ++i)
    for (int j = 0; j < dim_b; ++j)
      for (int k = 0; k < dim_a; ++k) out(i, j) += m(k * dim_b + i, k * dim_b + j);
  return DensityMatrix::from_matrix(out);
}

/// lambda*rho1 + (1-lambda)*rho2.
inline DensityMatrix mix(const DensityMatrix& rho1, const DensityMatrix& rho2, double lambda) {
  HermitianOperator::check_same_dim(rho1.op(), rho2.op());
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainViolation("mixing weight outside [0,1]");
  return DensityMatrix::from_matrix(lambda * rho1.matrix() + (1.0 - lambda) * rho2.matrix());
}

inline DensityMatrix conjugate(const DensityMatrix& rho, const Matrix& unitary) {
  return DensityMatrix::from_matrix(unitary * rho.matrix() * unitary.adjoint());
}

}  // namespace qtsallis
