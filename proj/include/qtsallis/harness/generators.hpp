#pragma once

// Random instance families for the verification suites.

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "qtsallis/states.hpp"

namespace qtsallis::harness {

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Probability vector with log-uniform weights spanning `decades` decades.
inline std::vector<double> log_uniform_spectrum(int d, double decades, Rng& rng) {
  std::vector<double> p(d);
  double s = 0.0;
  for (auto& x : p) {
    x = std::pow(10.0, -uniform(rng, 0.0, decades));
    s += x;
  }
  for (auto& x : p) x /= s;
  // absorb round-off so the sum is 1 to the last bit the validator checks
  double t = 0.0;
  for (int i = 1; i < d; ++i) t += p[i];
  p[0] = 1.0 - t;
  return p;
}

/// Full-rank state from one of three families: Hilbert-Schmidt, spread
/// spectrum (small eigenvalues), or near-uniform.
inline DensityMatrix random_full_rank(int d, Rng& rng) {
  switch (uniform_int(rng, 0, 2)) {
    case 0:
      return sample_density(d, d, rng);
    case 1: {
      const auto spec = log_uniform_spectrum(d, 4.0, rng);
      return density_with_spectrum(spec, rng);
    }
    default: {
      const auto spec = log_uniform_spectrum(d, 0.3, rng);
      return density_with_spectrum(spec, rng);
    }
  }
}

/// Two full-rank states; a third of the time rho is a small perturbation of sigma.
inline std::pair<DensityMatrix, DensityMatrix> random_full_rank_pair(int d, Rng& rng) {
  DensityMatrix sigma = random_full_rank(d, rng);
  if (uniform_int(rng, 0, 2) == 0) {
    const double eps = std::pow(10.0, -uniform(rng, 1.0, 6.0));
    DensityMatrix tau = random_full_rank(d, rng);
    return {mix(tau, sigma, eps), sigma};
  }
  DensityMatrix rho = random_full_rank(d, rng);
  return {rho, sigma};
}

/// Pair with ker(sigma) within ker(rho). Half the instances are full rank;
/// the rest share an exact kernel of dimension d - k and rho may have
/// smaller rank than sigma inside the common block.
inline std::pair<DensityMatrix, DensityMatrix> random_kernel_pair(int d, Rng& rng) {
  if (uniform_int(rng, 0, 1) == 0) return random_full_rank_pair(d, rng);
  const int k = uniform_int(rng, 1, d - 1);
  const Matrix u = haar_unitary(d, rng);
  DensityMatrix sigma_k = random_full_rank(k, rng);
  const int rho_rank = uniform_int(rng, 1, k);
  DensityMatrix rho_k = rho_rank == k ? random_full_rank(k, rng) : sample_density(k, rho_rank, rng);
  if (rho_rank == k && uniform_int(rng, 0, 2) == 0) rho_k = mix(rho_k, sigma_k, 1e-3);
  return {embed_state(rho_k, u), embed_state(sigma_k, u)};
}

/// Strictly positive operator with eigenvalues log-uniform over `decades`
/// decades below `scale`.
inline HermitianOperator random_positive(int d, double decades, double scale, Rng& rng) {
  RealVector ev(d);
  for (int i = 0; i < d; ++i) ev(i) = scale * std::pow(10.0, -uniform(rng, 0.0, decades));
  return HermitianOperator(from_eigensystem(haar_unitary(d, rng), ev));
}

/// (G + G^dagger)/2 scaled to spectral norm `norm`.
inline HermitianOperator random_hermitian(int d, double norm, Rng& rng) {
  const Matrix g = ginibre(d, d, rng);
  HermitianOperator h((g + g.adjoint()) * 0.5);
  return HermitianOperator(h.matrix() * (norm / std::max(h.spectral_norm(), 1e-300)));
}

/// sigma(b0) = (1 - b0 (d-1)) |0><0| + b0 (1 - |0><0|).
inline DensityMatrix sigma_family(int d, double b0) {
  RealVector ev = RealVector::Constant(d, b0);
  ev(0) = 1.0 - b0 * (d - 1);
  return DensityMatrix::from_matrix(Matrix(ev.cast<Complex>().asDiagonal()));
}

}  // namespace qtsallis::harness
