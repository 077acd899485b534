#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "qtsallis/state_io.hpp"
#include "qtsallis/states.hpp"

using namespace qtsallis;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }
Matrix diag(std::initializer_list<double> v) { return HermitianOperator::diagonal(v).matrix(); }

}  // namespace

TEST(DensityFromMatrix, MaximallyMixed) {
  const auto rho = density_from_matrix(diag({0.5, 0.5}));
  EXPECT_EQ(rho.rank(), 2);
  EXPECT_NEAR(rho.spectrum()(0), 0.5, 1e-15);
  EXPECT_NEAR(rho.spectrum()(1), 0.5, 1e-15);
}

TEST(DensityFromMatrix, PureState) {
  const auto rho = density_from_matrix(diag({1.0, 0.0}));
  EXPECT_EQ(rho.rank(), 1);
  EXPECT_LT(max_abs(rho.support_projector().matrix() - diag({1.0, 0.0})), 1e-15);
}

TEST(DensityFromMatrix, Errors) {
  EXPECT_THROW(density_from_matrix(diag({0.6, 0.5})), NotNormalized);
  EXPECT_THROW(density_from_matrix(diag({1.2, -0.2})), NotPSD);
  Matrix m = diag({0.5, 0.5});
  m(0, 1) = 0.3;
  EXPECT_THROW(density_from_matrix(m), NonHermitianInput);
}

TEST(DensityFromMatrix, ClampsRoundingNegatives) {
  const auto rho = density_from_matrix(diag({1.0 + 1e-13, -1e-13}));
  EXPECT_GE(rho.spectrum().minCoeff(), 0.0);
  EXPECT_EQ(rho.rank(), 1);
  EXPECT_NEAR(rho.spectrum().sum(), 1.0, 1e-15);
}

TEST(SampleDensity, ScalarAndRank) {
  Rng rng(1);
  const auto one = sample_density(1, 1, rng);
  EXPECT_NEAR(one.matrix()(0, 0).real(), 1.0, 1e-15);
  const auto r2 = sample_density(4, 2, rng);
  EXPECT_EQ(r2.rank(), 2);
  EXPECT_NEAR(r2.matrix().trace().real(), 1.0, 1e-12);
  EXPECT_THROW(sample_density(2, 3, rng), DomainViolation);
}

TEST(SampleDensity, DeterministicPerSeed) {
  Rng a(42), b(42);
  EXPECT_EQ(sample_density(2, 2, a).matrix(), sample_density(2, 2, b).matrix());
}

TEST(DensityWithSpectrum, Examples) {
  Rng rng(9);
  const std::vector<double> one{1.0};
  EXPECT_NEAR(density_with_spectrum(one, rng).matrix()(0, 0).real(), 1.0, 1e-15);
  const std::vector<double> spec{0.75, 0.25};
  const auto rho = density_with_spectrum(spec, rng);
  EXPECT_NEAR(rho.spectrum()(0), 0.25, 1e-10);
  EXPECT_NEAR(rho.spectrum()(1), 0.75, 1e-10);
  const std::vector<double> bad{0.5, 0.6};
  EXPECT_THROW(density_with_spectrum(bad, rng), BadSpectrum);
  const std::vector<double> neg{1.5, -0.5};
  EXPECT_THROW(density_with_spectrum(neg, rng), BadSpectrum);
}

TEST(KernelIncluded, Examples) {
  Rng rng(2);
  const auto full = sample_density(3, 3, rng);
  const auto pure = sample_density(3, 1, rng);
  EXPECT_TRUE(kernel_included(full, pure));
  EXPECT_FALSE(kernel_included(density_from_matrix(diag({1.0, 0.0})), density_from_matrix(diag({0.5, 0.5}))));
  EXPECT_TRUE(kernel_included(density_from_matrix(diag({0.5, 0.5, 0.0})), density_from_matrix(diag({0.6, 0.4, 0.0}))));
  EXPECT_NEAR(kernel_weight(density_from_matrix(diag({1.0, 0.0})), density_from_matrix(diag({0.5, 0.5}))), 0.5, 1e-15);
}

TEST(Tensor, Examples) {
  const auto a = density_from_matrix(diag({0.5, 0.5}));
  const auto b = density_from_matrix(diag({0.75, 0.25}));
  EXPECT_LT(max_abs(tensor(a, b).matrix() - diag({0.375, 0.125, 0.375, 0.125})), 1e-15);
  const auto unit = density_from_matrix(diag({1.0}));
  EXPECT_LT(max_abs(tensor(b, unit).matrix() - b.matrix()), 1e-15);
  Rng rng(3);
  const auto r1 = sample_density(3, 2, rng);
  const auto r2 = sample_density(2, 1, rng);
  EXPECT_EQ(tensor(r1, r2).rank(), 2);
}

TEST(PartialTrace, ProductStates) {
  Rng rng(4);
  const auto a = sample_density(2, 2, rng);
  const auto b = sample_density(3, 3, rng);
  const auto ab = tensor(a, b);
  EXPECT_LT(max_abs(partial_trace(ab, 2, 3, Subsystem::A).matrix() - a.matrix()), 1e-12);
  EXPECT_LT(max_abs(partial_trace(ab, 2, 3, Subsystem::B).matrix() - b.matrix()), 1e-12);
}

TEST(PartialTrace, BellStateReducesToMaximallyMixed) {
  Matrix bell = Matrix::Zero(4, 4);
  for (int i : {0, 3})
    for (int j : {0, 3}) bell(i, j) = 0.5;
  const auto rho = density_from_matrix(bell);
  EXPECT_EQ(rho.rank(), 1);
  EXPECT_LT(max_abs(partial_trace(rho, 2, 2, Subsystem::A).matrix() - diag({0.5, 0.5})), 1e-15);
}

TEST(PartialTrace, BadFactorization) {
  Rng rng(5);
  EXPECT_THROW(partial_trace(sample_density(6, 6, rng), 2, 2, Subsystem::A), BadFactorization);
}

TEST(MixAndConjugate, Basics) {
  const auto a = density_from_matrix(diag({1.0, 0.0}));
  const auto b = density_from_matrix(diag({0.0, 1.0}));
  EXPECT_LT(max_abs(mix(a, b, 0.25).matrix() - diag({0.25, 0.75})), 1e-15);
  EXPECT_THROW(mix(a, b, 1.5), DomainViolation);
  Rng rng(6);
  const Matrix u = haar_unitary(2, rng);
  EXPECT_LT(max_abs(u.adjoint() * u - Matrix::Identity(2, 2)), 1e-14);
  EXPECT_NEAR(conjugate(a, u).spectrum()(1), 1.0, 1e-14);
}

TEST(EmbedState, KernelIsExact) {
  Rng rng(7);
  const auto block = sample_density(2, 2, rng);
  const auto big = embed_state(block, haar_unitary(4, rng));
  EXPECT_EQ(big.rank(), 2);
  EXPECT_FALSE(big.full_rank());
  EXPECT_NEAR(big.min_nonzero_eigenvalue(), block.min_eigenvalue(), 1e-13);
}

TEST(StateIo, RoundTrip) {
  Rng rng(8);
  const auto rho = sample_density(3, 2, rng);
  const auto path = std::filesystem::temp_directory_path() / "qtsallis_state_roundtrip.json";
  write_state(path, rho);
  const auto back = read_state(path);
  EXPECT_EQ(back.matrix(), rho.matrix());
  std::filesystem::remove(path);
}

TEST(StateIo, ParseErrors) {
  EXPECT_THROW(state_matrix_from_json("not json"), ParseError);
  EXPECT_THROW(state_matrix_from_json(R"({"dim": 2})"), ParseError);
  EXPECT_THROW(state_matrix_from_json(R"({"dim": 2, "re": [[1,0]], "im": [[0,0],[0,0]]})"), ParseError);
  EXPECT_THROW(state_matrix_from_json(R"({"dim": 1, "re": [["x"]], "im": [[0]]})"), ParseError);
  EXPECT_THROW(read_state("/nonexistent/dir/state.json"), IOError);
}
