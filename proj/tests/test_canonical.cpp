#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "helpers.hpp"
#include "negafont/canonical.hpp"
#include "negafont/fonts.hpp"
#include "negafont/negativity.hpp"

using namespace negafont;
using oracle::Cx;

namespace {

const std::vector<unsigned> kCanonicalSlots = {0u, 4u, 5u, 6u, 7u};

bool on_canonical_support(const PureState<double>& st, double cut) {
  for (unsigned i = 0; i < static_cast<unsigned>(st.dim()); ++i) {
    if (std::abs(st.amp(i)) <= cut) continue;
    if (std::find(kCanonicalSlots.begin(), kCanonicalSlots.end(), i) ==
        kCanonicalSlots.end())
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("zero_slot_unitary clears the slot and keeps cross products") {
  std::mt19937_64 gen(51);
  const auto st = oracle::random_state(3, gen);
  const int p = 2;
  const unsigned column = 1;
  const auto before = oracle::all_minors(st, p);
  const auto op = zero_slot_unitary(st, p, column);
  CHECK(op.qubit == p);
  const auto out = apply_local(st, op);
  const auto m = oracle::amp_matrix(out, p);
  CHECK(std::abs(m(0, column)) < 1e-12);
  // b0I * b1J recovers the original minor against the cleared column.
  for (const auto& mn : before) {
    if (mn.c2 == column) {
      CHECK(std::abs(m(0, mn.c1) * m(1, mn.c2) - mn.det) < 1e-12);
    } else if (mn.c1 == column) {
      // det(J, I) = -det(I, J) with the cleared column first.
      CHECK(std::abs(m(0, mn.c2) * m(1, mn.c1) + mn.det) < 1e-12);
    }
  }
}

TEST_CASE("zero_slot_unitary rejects a vanishing pivot") {
  const auto ghz = reps::state(reps::kThreeCII);
  // Column 3 at p=1 has a(1,3) = a_{111} nonzero, fine; column 1 has
  // a(1,1) = a_{101} = 0 and must throw.
  CHECK_NOTHROW(zero_slot_unitary(ghz, 1, 3u));
  CHECK_THROWS_AS(zero_slot_unitary(ghz, 1, 1u), DegenerateSlotError);
}

TEST_CASE("annihilate_font_unitary kills a removable font") {
  // a|000> + b|111> + c|110>: the order-3 font of qubit 1 dies under a
  // rotation of qubit 3 with t = -b/c.
  const auto st = make_state<double>(
      3, {{BasisIndex::from_bits("000"), Cx(0.6, 0)},
          {BasisIndex::from_bits("111"), Cx(0.5, 0)},
          {BasisIndex::from_bits("110"), Cx(0.4, 0)}});
  const auto font = font_at(st, 1, 0u, 3u);
  REQUIRE(font.order == 3);
  const auto op = annihilate_font_unitary(st, 3, font);
  REQUIRE(op.has_value());
  CHECK(op->qubit == 3);
  const auto out = apply_local(st, *op);
  CHECK(std::abs(font_det(out, 1, 0u, 3u)) < 1e-12);
  // The rotation parameter sits in the lower-left entry.
  const double t = -0.5 / 0.4;
  const double norm = std::sqrt(1.0 + t * t);
  CHECK(std::abs(op->matrix(1, 0) - Cx(t / norm, 0)) < 1e-12);
}

TEST_CASE("annihilate_font_unitary reports unremovable fonts") {
  const auto ghz = reps::state(reps::kThreeCII);
  const auto font = font_at(ghz, 1, 0u, 3u);
  REQUIRE(std::abs(font.det) > 0.4);
  CHECK_FALSE(annihilate_font_unitary(ghz, 2, font).has_value());
}

TEST_CASE("annihilate_font_unitary is the identity on a dead font") {
  const auto ghz = reps::state(reps::kThreeCII);
  const auto font = font_at(ghz, 1, 1u, 2u);
  REQUIRE(std::abs(font.det) < 1e-15);
  const auto op = annihilate_font_unitary(ghz, 2, font);
  REQUIRE(op.has_value());
  CHECK((op->matrix - Matrix2c<double>::Identity()).cwiseAbs().maxCoeff() <
        1e-15);
}

TEST_CASE("canonicalize3 lands on the five-slot form") {
  std::mt19937_64 gen(52);
  for (int rep = 0; rep < 25; ++rep) {
    const auto st = oracle::random_state(3, gen);
    const auto form = canonicalize3(st);
    CHECK(form.lbp_count <= 5);
    CHECK(form.lbp_count == form.state.lbp_count());
    CHECK(on_canonical_support(form.state, 1e-10 * form.state.max_abs_amp()));
    // Leading slot is real nonnegative.
    CHECK(form.state.amp(0).real() >= 0.0);
    CHECK(std::abs(form.state.amp(0).imag()) <=
          1e-9 * form.state.max_abs_amp());
    // Unitary trail reproduces the canonical state.
    const auto replay = apply_local(st, form.ops);
    CHECK((replay.amps - form.state.amps).cwiseAbs().maxCoeff() < 1e-9);
    for (const auto& op : form.ops) CHECK(op.kind == OpKind::Unitary);
    // Per-qubit negativities are preserved.
    for (int p = 1; p <= 3; ++p)
      CHECK(std::abs(global_negativity(st, p) -
                     global_negativity(form.state, p)) < 1e-10);
    CHECK(form.converged);
    CHECK(form.restarts_used == 0);
  }
}

TEST_CASE("canonicalize3 is idempotent") {
  std::mt19937_64 gen(53);
  for (int rep = 0; rep < 10; ++rep) {
    const auto once = canonicalize3(oracle::random_state(3, gen)).state;
    const auto twice = canonicalize3(once).state;
    CHECK((twice.amps - once.amps).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("canonicalize3 fixed points and known forms") {
  const auto ghz = reps::state(reps::kThreeCII);
  const auto ghz_form = canonicalize3(ghz);
  CHECK((ghz_form.state.amps - ghz.amps).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(ghz_form.lbp_count == 2);

  // W collapses to exactly the three-slot representative.
  const auto w_form = canonicalize3(reps::state(reps::kW3));
  const double r3 = 1.0 / std::sqrt(3.0);
  CHECK(w_form.lbp_count == 3);
  CHECK(std::abs(w_form.state.amp(0) - Cx(r3, 0)) < 1e-12);
  CHECK(std::abs(w_form.state.amp(5) - Cx(r3, 0)) < 1e-12);
  CHECK(std::abs(w_form.state.amp(6) - Cx(r3, 0)) < 1e-12);

  CHECK_THROWS_AS(canonicalize3(reps::state(reps::kFourCV)),
                  std::domain_error);
}

TEST_CASE("canonicalize3 undoes a local disguise") {
  std::mt19937_64 gen(54);
  const auto base = reps::state(reps::kThreeCII);
  for (int rep = 0; rep < 10; ++rep) {
    auto st = base;
    for (int q = 1; q <= 3; ++q)
      st = apply_local(
          st, unitary_op(q, Matrix2c<double>(oracle::random_unitary(gen))));
    const auto form = canonicalize3(st);
    CHECK(form.lbp_count == 2);
    CHECK(std::abs(form.state.amp(0).real() - 1.0 / std::sqrt(2.0)) < 1e-9);
    CHECK(std::abs(std::abs(form.state.amp(7)) - 1.0 / std::sqrt(2.0)) <
          1e-9);
  }
}

TEST_CASE("heuristic never worsens the discrete objective") {
  std::mt19937_64 gen(55);
  for (int rep = 0; rep < 4; ++rep) {
    const auto st = oracle::random_state(4, gen);
    const auto form = canonicalize_heuristic(st, 4, 1e-10, 7);
    CHECK_FALSE(objective_of(st) < form.objective);
    CHECK(form.objective == objective_of(form.state));
    const auto replay = apply_local(st, form.ops);
    CHECK((replay.amps - form.state.amps).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("heuristic keeps already-canonical representatives unchanged") {
  for (const char* rep :
       {reps::kFourCI, reps::kFourCII, reps::kFourCIII, reps::kFourCIV,
        reps::kFourCV, reps::kFourCVI, reps::kFourCVII}) {
    const auto st = reps::state(rep);
    const auto form = canonicalize_heuristic(st, 4, 1e-10, 3);
    CHECK((form.state.amps - st.amps).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(form.converged);
  }
}

TEST_CASE("heuristic recovers a disguised ghz") {
  std::mt19937_64 gen(56);
  auto st = reps::state(reps::kFourCV);
  for (int q = 1; q <= 4; ++q)
    st = apply_local(
        st, unitary_op(q, Matrix2c<double>(oracle::random_unitary(gen))));
  const auto form = canonicalize_heuristic(st, 32, 1e-10, 0);
  CHECK(form.objective == CanonObjective{2, -4, 1});
  CHECK(form.lbp_count == 2);
  CHECK(form.converged);
  // Some maximal-magnitude slot is real nonnegative (ties are unspecified).
  const double top = form.state.max_abs_amp();
  bool aligned = false;
  for (unsigned i = 0; i < static_cast<unsigned>(form.state.dim()); ++i) {
    const auto a = form.state.amp(i);
    if (std::abs(a) >= top * (1.0 - 1e-12) && std::abs(std::arg(a)) < 1e-9)
      aligned = true;
  }
  CHECK(aligned);
}

TEST_CASE("heuristic is idempotent and deterministic") {
  std::mt19937_64 gen(57);
  const auto st = oracle::random_state(4, gen);
  const auto a = canonicalize_heuristic(st, 4, 1e-10, 9);
  const auto b = canonicalize_heuristic(st, 4, 1e-10, 9);
  CHECK((a.state.amps - b.state.amps).cwiseAbs().maxCoeff() == 0.0);
  const auto again = canonicalize_heuristic(a.state, 4, 1e-10, 9);
  CHECK((again.state.amps - a.state.amps).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("slocc_reduce clears the lower slot of the leading column") {
  std::mt19937_64 gen(58);
  const auto st = oracle::random_state(3, gen);
  const auto form = canonicalize3(st);
  REQUIRE(std::abs(form.state.amp(4)) > 1e-6);
  const auto reduced = slocc_reduce(form);
  CHECK(std::abs(reduced.state.amp(4)) < 1e-12);
  CHECK(reduced.ops.size() == form.ops.size() + 1);
  CHECK(reduced.ops.back().kind == OpKind::Invertible);
  CHECK_FALSE(form.objective < reduced.objective);
  const auto replay = apply_local(st, reduced.ops);
  CHECK((replay.amps - reduced.state.amps).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("slocc_reduce skips degenerate leading columns") {
  const auto ghz_form = canonicalize3(reps::state(reps::kThreeCII));
  const auto reduced = slocc_reduce(ghz_form);
  CHECK((reduced.state.amps - ghz_form.state.amps).cwiseAbs().maxCoeff() <
        1e-15);
  CHECK(reduced.ops.size() == ghz_form.ops.size());
}

TEST_CASE("cluster invariant on fixed states") {
  CHECK(std::abs(cluster_invariant(reps::state(reps::ghz(3).c_str())) -
                 Cx(0.25, 0)) < 1e-12);
  CHECK(std::abs(cluster_invariant(reps::state(reps::ghz(4).c_str())) -
                 Cx(0.25, 0)) < 1e-12);
  CHECK(std::abs(cluster_invariant(reps::state(reps::ghz(5).c_str())) -
                 Cx(0.25, 0)) < 1e-12);
  // Product state: all determinants vanish.
  const auto plus = make_state<double>(
      4, {{BasisIndex(4, 0), Cx(1, 0)},
          {BasisIndex(4, 1), Cx(1, 0)},
          {BasisIndex(4, 2), Cx(1, 0)},
          {BasisIndex(4, 3), Cx(1, 0)}});
  CHECK(std::abs(cluster_invariant(plus)) < 1e-14);
  CHECK_THROWS_AS(
      cluster_invariant(make_state<double>(
          2, {{BasisIndex::from_bits("00"), Cx(1, 0)},
              {BasisIndex::from_bits("11"), Cx(1, 0)}})),
      std::domain_error);
}

TEST_CASE("cluster invariant is stable under rotations of the first pair") {
  std::mt19937_64 gen(59);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (int n : {4, 5}) {
    const unsigned all1 = (1u << n) - 1u;
    const unsigned tail = (1u << (n - 2)) - 1u;   // 0011...1
    const unsigned head = all1 ^ tail;            // 1100...0
    const auto st = make_state<double>(
        n, {{BasisIndex(n, 0), Cx(ud(gen), ud(gen))},
            {BasisIndex(n, all1), Cx(ud(gen), ud(gen))},
            {BasisIndex(n, tail), Cx(ud(gen), ud(gen))},
            {BasisIndex(n, head), Cx(ud(gen), ud(gen))}});
    const Cx base = cluster_invariant(st);
    for (int rep = 0; rep < 20; ++rep) {
      auto rotated = apply_local(
          st,
          unitary_op(1, Matrix2c<double>(oracle::random_special_unitary(gen))));
      rotated = apply_local(
          rotated,
          unitary_op(2, Matrix2c<double>(oracle::random_special_unitary(gen))));
      CHECK(std::abs(cluster_invariant(rotated) - base) < 1e-9);
    }
    // A stray determinant phase scales the combination by (det U)^2: here
    // det = i, so the value flips sign.
    const Eigen::Matrix2cd phased =
        Eigen::Matrix2cd::Identity() * std::polar(1.0, M_PI / 4.0);
    const auto twisted =
        apply_local(st, unitary_op(1, Matrix2c<double>(phased)));
    CHECK(std::abs(cluster_invariant(twisted) + base) < 1e-9);
  }
}
