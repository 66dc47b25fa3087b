#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qbat/errors.hpp"
#include "qbat/open_system.hpp"
#include "support.hpp"

using namespace qbat;
using namespace qbat::test;

TEST_CASE("DensityMatrix validation") {
  CHECK_THROWS_AS(DensityMatrix(HermitianMatrix(ComplexMatrix::identity(2))), StateError);
  const double neg[] = {1.5, -0.5};
  CHECK_THROWS_AS(DensityMatrix(HermitianMatrix::diagonal(neg)), StateError);
  CHECK_THROWS_AS(DensityMatrix::basis_state(2, 2), ParameterError);
  CHECK(DensityMatrix::basis_state(3, 1).min_eigenvalue() == 0.0);
}

TEST_CASE("von_neumann_entropy examples") {
  CHECK(von_neumann_entropy(DensityMatrix::basis_state(2, 0)) == 0.0);
  CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(2)) == doctest::Approx(0.693147180559945).epsilon(1e-14));
  const double p[] = {0.75, 0.25};
  const double oracle = -0.75 * std::log(0.75) - 0.25 * std::log(0.25);
  CHECK(von_neumann_entropy(DensityMatrix(HermitianMatrix::diagonal(p))) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("entropy is bounded and unitarily invariant") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 2 + trial % 7;
    const auto rho = random_density(d, rng);
    const double s = von_neumann_entropy(rho);
    CHECK(s >= 0.0);
    CHECK(s <= std::log(static_cast<double>(d)) + 1e-12);
    const auto u = random_unitary(d, rng);
    const DensityMatrix rotated(HermitianMatrix(u * rho.matrix() * u.adjoint()));
    CHECK(std::abs(von_neumann_entropy(rotated) - s) <= 1e-10);
  }
}

TEST_CASE("dissipator examples") {
  const auto excited = DensityMatrix::basis_state(2, 1);
  const auto ground = DensityMatrix::basis_state(2, 0);
  // sigma_- |1><1| sigma_+ = |0><0|, {sigma_+ sigma_-, |1><1|}/2 = |1><1|
  const auto expected = ComplexMatrix::unit(2, 0, 0) - ComplexMatrix::unit(2, 1, 1);
  CHECK(max_abs_diff(dissipator(sigma_minus(), excited), expected) == 0.0);
  CHECK(dissipator(sigma_minus(), ground).matrix().max_abs() == 0.0);
  CHECK_THROWS_AS(dissipator(ComplexMatrix(3), ground), DimensionError);
}

TEST_CASE("dissipator and liouvillian are traceless and Hermitian") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + trial % 7;
    const auto rho = random_density(d, rng);
    const auto l = ginibre(d, rng);
    const auto dis = dissipator(l, rho);
    CHECK(std::abs(dis.matrix().trace()) <= 1e-12);
    CHECK(dis.construction_defect() <= 1e-12);

    const LindbladModel model(random_hermitian(d, rng), {{0.7, l}, {0.2, ginibre(d, rng)}});
    const auto rate = apply_liouvillian(model, rho.matrix());
    CHECK(std::abs(rate.trace()) <= 1e-12);
    CHECK(rate.hermiticity_defect() <= 1e-12);
  }
}

TEST_CASE("liouvillian examples") {
  const LindbladModel closed(qubit_h(), {});
  const double p[] = {0.3, 0.7};
  const DensityMatrix diag_state(HermitianMatrix::diagonal(p));
  CHECK(liouvillian(closed, diag_state).matrix().max_abs() == 0.0);

  const auto decay = qubit_model(sigma_minus());
  const auto expected = ComplexMatrix::unit(2, 0, 0) - ComplexMatrix::unit(2, 1, 1);
  CHECK(max_abs_diff(liouvillian(decay, DensityMatrix::basis_state(2, 1)), expected) <= 1e-15);
}

TEST_CASE("LindbladModel validation") {
  CHECK_THROWS_AS(LindbladModel(HermitianMatrix(ComplexMatrix(1)), {}), DimensionError);
  CHECK_THROWS_AS(LindbladModel(qubit_h(), {{-1.0, sigma_minus()}}), ParameterError);
  CHECK_THROWS_AS(LindbladModel(qubit_h(), {{1.0, ComplexMatrix(3)}}), DimensionError);
}

TEST_CASE("propagate: zero generator keeps the state") {
  const LindbladModel zero(HermitianMatrix(ComplexMatrix(2)), {});
  Rng rng(3);
  const auto rho = random_density(2, rng);
  const auto grid = uniform_grid(0.0, 0.1, 0.01);
  const auto traj = propagate(zero, rho, grid);
  REQUIRE(traj.size() == grid.size());
  for (const auto& s : traj.states) CHECK(max_abs_diff(s, rho) == 0.0);
}

TEST_CASE("propagate: amplitude damping follows exp(-t)") {
  const auto model = qubit_model(sigma_minus());
  const auto grid = uniform_grid(0.0, 5.0, 1e-3);
  const auto traj = propagate(model, DensityMatrix::basis_state(2, 1), grid);
  REQUIRE(traj.size() == 5001);
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    worst = std::max(worst, std::abs(traj.states[i](1, 1).real() - std::exp(-traj.times[i])));
    CHECK(traj.diagnostics[i].trace_defect <= 1e-8);
    CHECK(traj.diagnostics[i].hermiticity_defect <= 1e-10);
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("propagate: fourth-order convergence") {
  const auto model = qubit_model(sigma_minus());
  auto error_at_one = [&](double h) {
    const auto grid = uniform_grid(0.0, 1.0, h);
    const auto traj = propagate(model, DensityMatrix::basis_state(2, 1), grid);
    return std::abs(traj.states.back()(1, 1).real() - std::exp(-1.0));
  };
  const double ratio = error_at_one(0.1) / error_at_one(0.05);
  CHECK(ratio == doctest::Approx(16.0).epsilon(3.0 / 16.0));
}

TEST_CASE("propagate: unitary evolution conserves entropy") {
  Rng rng(8);
  const LindbladModel model(random_hermitian(3, rng), {});
  const auto rho = random_density(3, rng);
  const auto grid = uniform_grid(0.0, 2.0, 1e-2);
  const auto traj = propagate(model, rho, grid);
  const double s0 = von_neumann_entropy(rho);
  for (const auto& s : traj.states) CHECK(std::abs(von_neumann_entropy(s) - s0) <= 1e-8);
}

TEST_CASE("propagate rejects bad grids and reports breaches") {
  const auto model = qubit_model(sigma_minus(), 1.0);
  const auto rho = DensityMatrix::basis_state(2, 1);
  const double uneven[] = {0.0, 0.1, 0.3};
  CHECK_THROWS_AS(propagate(model, rho, uneven), ParameterError);
  const double backwards[] = {0.0, -0.1};
  CHECK_THROWS_AS(propagate(model, rho, backwards), ParameterError);

  // A step far beyond the RK4 stability region drives populations negative.
  const auto grid = uniform_grid(0.0, 20.0, 5.0);
  try {
    propagate(model, rho, grid);
    FAIL("expected PropagationError");
  } catch (const PropagationError& e) {
    CHECK(e.step() == 1);
    CHECK(e.defects().min_eigenvalue < -1e-8);
    CHECK(e.partial().size() == 1);
  }
}

TEST_CASE("regularize examples") {
  const auto mixed = regularize(DensityMatrix::basis_state(2, 0), 0.5);
  const double expected[] = {0.75, 0.25};
  CHECK(max_abs_diff(mixed, ComplexMatrix::diagonal(expected)) <= 1e-16);

  Rng rng(12);
  const auto rho = random_density(4, rng);
  const double eps = 1e-3;
  const auto reg = regularize(rho, eps);
  const auto target = ComplexMatrix::identity(4) * Complex(0.25) - rho.matrix();
  CHECK(std::abs(max_abs_diff(reg, rho) - eps * target.max_abs()) <= 1e-15);
  CHECK(reg.min_eigenvalue() >= eps / 4 - 1e-15);

  const auto maxmix = DensityMatrix::maximally_mixed(3);
  CHECK(max_abs_diff(regularize(maxmix, 0.37), maxmix) <= 1e-16);

  CHECK_THROWS_AS(regularize(rho, 0.0), ParameterError);
  CHECK_THROWS_AS(regularize(rho, 1.0), ParameterError);
}

TEST_CASE("thermal state populations") {
  const auto rho = DensityMatrix::thermal(qubit_h(), 1.0);
  const double z = 1.0 + std::exp(-1.0);
  CHECK(rho(0, 0).real() == doctest::Approx(1.0 / z).epsilon(1e-14));
  CHECK(rho(1, 1).real() == doctest::Approx(std::exp(-1.0) / z).epsilon(1e-14));
}
