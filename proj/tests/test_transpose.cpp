#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <random>
#include <stdexcept>

#include "helpers.hpp"
#include "negafont/negativity.hpp"
#include "negafont/transpose.hpp"

using namespace negafont;
using oracle::Cx;

namespace {

PureState<double> bell() {
  return make_state<double>(2, {{BasisIndex::from_bits("00"), Cx(1, 0)},
                                {BasisIndex::from_bits("11"), Cx(1, 0)}});
}

}  // namespace

TEST_CASE("partial transpose argument validation") {
  const auto rho = density(bell());
  CHECK_THROWS_AS(global_pt(rho, 0), std::domain_error);
  CHECK_THROWS_AS(global_pt(rho, 3), std::domain_error);
  CHECK_THROWS_AS(kway_pt(rho, 1, 1), std::domain_error);
  CHECK_THROWS_AS(kway_pt(rho, 1, 3), std::domain_error);
  // Only plain density operators may be transposed again.
  CHECK_THROWS_AS(global_pt(global_pt(rho, 1), 1), std::domain_error);
  CHECK_THROWS_AS(decomposition_residual(global_pt(rho, 1), 1),
                  std::domain_error);
}

TEST_CASE("transposes are trace-preserving and Hermitian") {
  std::mt19937_64 gen(21);
  const auto st = oracle::random_state(3, gen);
  const auto rho = density(st);
  for (int p = 1; p <= 3; ++p) {
    const auto g = global_pt(rho, p);
    CHECK(std::abs(g.mat.trace() - Cx(1, 0)) < 1e-13);
    CHECK((g.mat - g.mat.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(g.kind == DensityKind::GlobalPT);
    CHECK(g.transposed_qubit == p);
    for (int k = 2; k <= 3; ++k) {
      const auto kk = kway_pt(rho, p, k);
      CHECK(std::abs(kk.mat.trace() - Cx(1, 0)) < 1e-13);
      CHECK((kk.mat - kk.mat.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
      CHECK(kk.kind == DensityKind::KwayPT);
      CHECK(kk.kway == k);
    }
  }
}

TEST_CASE("bell state: global transpose spectrum is {1/2,1/2,1/2,-1/2}") {
  const auto vals = eigvals_hermitian(global_pt(density(bell()), 1).mat);
  REQUIRE(vals.size() == 4);
  CHECK(vals(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(vals(1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(vals(2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(vals(3) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("ghz: global transpose moves the corner coherence to (3,4)") {
  const auto rho = density(reps::state(reps::kThreeCII));
  const auto g = global_pt(rho, 1);
  CHECK(std::abs(g.mat(0, 7)) < 1e-15);
  CHECK(std::abs(g.mat(3, 4) - Cx(0.5, 0)) < 1e-14);
  CHECK(std::abs(g.mat(4, 3) - Cx(0.5, 0)) < 1e-14);
  // Populations stay put.
  CHECK(std::abs(g.mat(0, 0) - Cx(0.5, 0)) < 1e-14);
  CHECK(std::abs(g.mat(7, 7) - Cx(0.5, 0)) < 1e-14);
  // Only the 3-way transpose touches a distance-3 coherence.
  CHECK(std::abs(kway_pt(rho, 1, 2).mat(0, 7) - Cx(0.5, 0)) < 1e-14);
  CHECK(std::abs(kway_pt(rho, 1, 3).mat(0, 7)) < 1e-15);
  CHECK(std::abs(kway_pt(rho, 1, 3).mat(3, 4) - Cx(0.5, 0)) < 1e-14);
}

TEST_CASE("w state: the 2-way transpose moves exactly eight entries") {
  const auto rho = density(reps::state(reps::kW3));
  const auto k2 = kway_pt(rho, 1, 2);
  int changed = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (std::abs(k2.mat(i, j) - rho.mat(i, j)) > 1e-15) ++changed;
  CHECK(changed == 8);
  // |001><100| and |010><100| land on |101><000| and |110><000|.
  CHECK(std::abs(k2.mat(1, 4)) < 1e-15);
  CHECK(std::abs(k2.mat(5, 0) - Cx(1.0 / 3, 0)) < 1e-14);
  CHECK(std::abs(k2.mat(6, 0) - Cx(1.0 / 3, 0)) < 1e-14);
  // The 3-way transpose leaves this state alone.
  CHECK((kway_pt(rho, 1, 3).mat - rho.mat).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("real states decompose exactly") {
  std::mt19937_64 gen(5);
  for (int n = 2; n <= 5; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto st = oracle::random_state(n, gen, /*real_only=*/true);
      const auto rho = density(st);
      for (int p = 1; p <= n; ++p)
        CHECK(decomposition_residual(rho, p).max_abs < 1e-13);
    }
  }
}

TEST_CASE("residual lives on distance-1 pairs and equals the skew part") {
  std::mt19937_64 gen(6);
  for (int n = 3; n <= 4; ++n) {
    const auto st = oracle::random_state(n, gen);
    const auto rho = density(st);
    for (int p = 1; p <= n; ++p) {
      const auto rep = decomposition_residual(rho, p);
      for (int i = 0; i < rho.dim(); ++i)
        for (int j = 0; j < rho.dim(); ++j) {
          const bool support = hamming(static_cast<unsigned>(i),
                                       static_cast<unsigned>(j)) == 1 &&
                               bit_of(static_cast<unsigned>(i), n, p) !=
                                   bit_of(static_cast<unsigned>(j), n, p);
          if (support) {
            const Cx want = rho.mat(j, i) - rho.mat(i, j);
            CHECK(std::abs(rep.residual(i, j) - want) < 1e-13);
          } else {
            CHECK(std::abs(rep.residual(i, j)) < 1e-13);
          }
        }
    }
  }
}

TEST_CASE("frozen complex example: residual magnitude 1 at (0,4)") {
  const auto st = make_state<double>(
      3, {{BasisIndex::from_bits("000"), Cx(1, 0)},
          {BasisIndex::from_bits("100"), Cx(0, 1)}});
  const auto rep = decomposition_residual(density(st), 1);
  CHECK(rep.max_abs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(rep.residual(0, 4) - Cx(0, 1)) < 1e-13);
  CHECK(std::abs(rep.residual(4, 0) + Cx(0, 1)) < 1e-13);
}
