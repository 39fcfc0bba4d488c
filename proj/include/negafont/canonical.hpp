// Local-unitary canonical forms: the exact 3-qubit reduction, a multi-start
// heuristic for n >= 4, slot/font annihilating operators and the two-qubit
// invariant combination of font determinants.
#pragma once

#include <Eigen/SVD>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "negafont/core.hpp"
#include "negafont/fonts.hpp"
#include "negafont/state.hpp"

namespace negafont {

// Lexicographic search objective: fewer basis kets first, then higher leading
// font order, then fewer censused fonts at the strongest qubit.
struct CanonObjective {
  int lbp = 0;
  int neg_max_order = 0;
  int font_count = 0;

  friend bool operator==(const CanonObjective&, const CanonObjective&) =
      default;
  friend bool operator<(const CanonObjective& a, const CanonObjective& b) {
    return std::tie(a.lbp, a.neg_max_order, a.font_count) <
           std::tie(b.lbp, b.neg_max_order, b.font_count);
  }
};

template <typename Scalar>
CanonObjective objective_of(const PureState<Scalar>& state,
                            Scalar tol = Scalar(kDefaultTol)) {
  CanonObjective obj;
  obj.lbp = state.lbp_count(tol);
  int max_order = 0;
  int fonts = 0;
  for (int p = 1; p <= state.n; ++p) {
    const FontCensus<Scalar> census = font_census(state, p, tol);
    const int k = census.max_order();
    const int total = census.total_count();
    if (k > max_order || (k == max_order && k > 0 && total < fonts)) {
      max_order = k;
      fonts = total;
    }
  }
  obj.neg_max_order = -max_order;
  obj.font_count = fonts;
  return obj;
}

template <typename Scalar>
struct CanonicalForm {
  PureState<Scalar> state;
  // Replaying ops in order on the input reproduces state.
  std::vector<LocalOperator<Scalar>> ops;
  int lbp_count = 0;
  CanonObjective objective;
  int restarts_used = 0;
  bool converged = true;
  std::vector<std::pair<int, CanonObjective>> objective_trace;
};

// Unitary on qubit p that zeroes the amplitude in slot (0, J), J a column
// label over the remaining qubits. Multiplying any slot pair (0,I),(1,J) of
// the result reproduces a_{0I} a_{1J} - a_{1I} a_{0J} exactly.
template <typename Scalar>
LocalOperator<Scalar> zero_slot_unitary(const PureState<Scalar>& state, int p,
                                        unsigned column,
                                        Scalar tol = Scalar(kDefaultTol)) {
  const int n = state.n;
  if (p < 1 || p > n) throw std::domain_error("qubit index out of range");
  if (column >= (1u << (n - 1)))
    throw std::domain_error("column label out of range");
  const Complex<Scalar> a0 = state.amp(detail::full_index(n, p, 0, column));
  const Complex<Scalar> a1 = state.amp(detail::full_index(n, p, 1, column));
  if (std::abs(a1) <= tol * state.max_abs_amp())
    throw DegenerateSlotError("slot (1, J) is numerically zero");
  const Complex<Scalar> r = a0 / a1;
  const Scalar k = Scalar(1) / std::sqrt(Scalar(1) + std::norm(r));
  Matrix2c<Scalar> u;
  u << Complex<Scalar>(k, 0), -k * r, k * std::conj(r), Complex<Scalar>(k, 0);
  return unitary_op(p, u);
}

namespace detail {

template <typename Scalar>
using Column2 = Eigen::Vector<Complex<Scalar>, 2>;

template <typename Scalar>
Column2<Scalar> amp_column(const PureState<Scalar>& state, int p, unsigned c) {
  Column2<Scalar> col;
  col(0) = state.amp(full_index(state.n, p, 0, c));
  col(1) = state.amp(full_index(state.n, p, 1, c));
  return col;
}

template <typename Scalar>
Complex<Scalar> det2(const Column2<Scalar>& x, const Column2<Scalar>& y) {
  return x(0) * y(1) - x(1) * y(0);
}

// Roots of a z^2 + b z + c = 0 with the usual cancellation-free branch.
template <typename Scalar>
std::vector<Complex<Scalar>> quadratic_roots(Complex<Scalar> a,
                                             Complex<Scalar> b,
                                             Complex<Scalar> c, Scalar eps) {
  std::vector<Complex<Scalar>> roots;
  if (std::abs(a) <= eps) {
    if (std::abs(b) > eps) roots.push_back(-c / b);
    return roots;
  }
  const Complex<Scalar> disc = b * b - Scalar(4) * a * c;
  // A discriminant at roundoff scale is a double root in disguise. The sqrt
  // branch would surface half the significant digits as root error, while the
  // vertex -b/(2a) stays accurate to machine precision.
  const Scalar disc_scale =
      std::norm(b) + Scalar(4) * std::abs(a) * std::abs(c);
  constexpr Scalar mach = std::numeric_limits<Scalar>::epsilon();
  if (std::abs(disc) <= Scalar(4096) * mach * disc_scale) {
    roots.push_back(-b / (Scalar(2) * a));
    return roots;
  }
  Complex<Scalar> s = std::sqrt(disc);
  if (std::abs(b + s) < std::abs(b - s)) s = -s;
  const Complex<Scalar> q = -(b + s) / Scalar(2);
  if (std::abs(q) > eps) {
    roots.push_back(q / a);
    roots.push_back(c / q);
  } else {
    roots.push_back(Complex<Scalar>(0, 0));
  }
  return roots;
}

template <typename Scalar>
void sort_candidate_roots(std::vector<Complex<Scalar>>& roots) {
  std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) {
    return std::make_tuple(std::abs(x), -x.real(), -x.imag()) <
           std::make_tuple(std::abs(y), -y.real(), -y.imag());
  });
}

// U(t) = [[1, -conj(t)], [t, 1]] / sqrt(1 + |t|^2).
template <typename Scalar>
Matrix2c<Scalar> font_annihilator_matrix(Complex<Scalar> t) {
  const Scalar k = Scalar(1) / std::sqrt(Scalar(1) + std::norm(t));
  Matrix2c<Scalar> u;
  u << Complex<Scalar>(k, 0), -k * std::conj(t), k * t, Complex<Scalar>(k, 0);
  return u;
}

}  // namespace detail

// Unitary on qubit q (q != font.p) driving the determinant of the same column
// pair to zero. Closed-form quadratic when the determinant depends on t alone
// (q a spectator); otherwise a damped two-variable Newton search with seeded
// restarts on the unit disk. Returns nullopt when no unitary reaches the
// target residual.
template <typename Scalar>
std::optional<LocalOperator<Scalar>> annihilate_font_unitary(
    const PureState<Scalar>& state, int q, const NegativityFont<Scalar>& font,
    Scalar tol = Scalar(kDefaultTol)) {
  const int n = state.n;
  const int p = font.p;
  if (q < 1 || q > n) throw std::domain_error("qubit index out of range");
  if (q == p)
    throw std::invalid_argument("annihilating qubit must differ from the row qubit");

  const Scalar scale = state.max_abs_amp();
  const Scalar det_cut = tol * scale * scale;
  const unsigned c1 = font.base_column;
  const unsigned c2 = font.other_column;
  const Complex<Scalar> d0 = font_det(state, p, c1, c2);
  if (std::abs(d0) <= det_cut) return identity_op<Scalar>(q);

  auto residual_for = [&](Complex<Scalar> t) {
    const PureState<Scalar> moved =
        apply_local(state, LocalOperator<Scalar>{
                               q, detail::font_annihilator_matrix(t),
                               OpKind::Unitary});
    return std::abs(font_det(moved, p, c1, c2));
  };
  auto accept = [&](Complex<Scalar> t) -> std::optional<LocalOperator<Scalar>> {
    if (residual_for(t) < Scalar(10) * det_cut)
      return unitary_op(q, detail::font_annihilator_matrix(t));
    return std::nullopt;
  };

  const unsigned qmask = detail::column_mask_of_qubit(n, p, q);
  const Scalar eps = Scalar(1e-14) * scale * scale;

  if (((c1 ^ c2) & qmask) == 0) {
    // q is a spectator: the transformed determinant is a quadratic in t (bit
    // 1) or conj(t) (bit 0).
    const auto a = detail::amp_column(state, p, c1);
    const auto b = detail::amp_column(state, p, c2);
    const auto ah = detail::amp_column(state, p, c1 ^ qmask);
    const auto bh = detail::amp_column(state, p, c2 ^ qmask);
    const Complex<Scalar> dh = detail::det2(ah, bh);
    const Complex<Scalar> x = detail::det2(a, bh) + detail::det2(ah, b);
    const int s = (c1 & qmask) ? 1 : 0;
    auto roots = s == 1 ? detail::quadratic_roots(dh, x, d0, eps)
                        : detail::quadratic_roots(dh, -x, d0, eps);
    if (s == 0)
      for (auto& z : roots) z = std::conj(z);
    detail::sort_candidate_roots(roots);
    for (const auto& t : roots)
      if (auto op = accept(t)) return op;
    return std::nullopt;
  }

  // q is a flip qubit: N(t) = d0 + beta t + gamma conj(t) + zeta |t|^2.
  const auto a = detail::amp_column(state, p, c1);
  const auto b = detail::amp_column(state, p, c2);
  const auto u = detail::amp_column(state, p, c1 ^ qmask);
  const auto w = detail::amp_column(state, p, c2 ^ qmask);
  Complex<Scalar> beta, gamma;
  const Complex<Scalar> zeta = -detail::det2(u, w);
  if ((c1 & qmask) == 0) {
    beta = detail::det2(a, w);
    gamma = -detail::det2(u, b);
  } else {
    beta = detail::det2(u, b);
    gamma = -detail::det2(a, w);
  }

  if (std::abs(gamma) <= eps && std::abs(zeta) <= eps) {
    auto roots = detail::quadratic_roots(Complex<Scalar>(0, 0), beta, d0, eps);
    detail::sort_candidate_roots(roots);
    for (const auto& t : roots)
      if (auto op = accept(t)) return op;
    return std::nullopt;
  }
  if (std::abs(beta) <= eps && std::abs(zeta) <= eps) {
    auto roots = detail::quadratic_roots(Complex<Scalar>(0, 0), gamma, d0, eps);
    detail::sort_candidate_roots(roots);
    for (auto t : roots)
      if (auto op = accept(std::conj(t))) return op;
    return std::nullopt;
  }

  auto value = [&](Complex<Scalar> t) {
    return d0 + beta * t + gamma * std::conj(t) + zeta * std::norm(t);
  };
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  Complex<Scalar> best_t(0, 0);
  Scalar best_res = residual_for(best_t);
  for (int restart = 0; restart < 64; ++restart) {
    Complex<Scalar> t;
    if (restart == 0) {
      t = Complex<Scalar>(0, 0);
    } else {
      const Scalar r = std::sqrt(Scalar(detail::uniform_unit(rng)));
      const Scalar ang =
          Scalar(2 * 3.14159265358979323846 * detail::uniform_unit(rng));
      t = Complex<Scalar>(r * std::cos(ang), r * std::sin(ang));
    }
    for (int iter = 0; iter < 60; ++iter) {
      const Complex<Scalar> f = value(t);
      if (std::abs(f) < eps) break;
      const Complex<Scalar> ft = beta + zeta * std::conj(t);
      const Complex<Scalar> ftb = gamma + zeta * t;
      const Complex<Scalar> dx = ft + ftb;             // dF/d(Re t)
      const Complex<Scalar> dy = Complex<Scalar>(0, 1) * (ft - ftb);
      Eigen::Matrix<Scalar, 2, 2> jac;
      jac << dx.real(), dy.real(), dx.imag(), dy.imag();
      const Scalar det = jac.determinant();
      if (std::abs(det) < Scalar(1e-30)) break;
      Eigen::Vector<Scalar, 2> rhs(-f.real(), -f.imag());
      const Eigen::Vector<Scalar, 2> step = jac.inverse() * rhs;
      Scalar damp = Scalar(1);
      bool moved = false;
      for (int halvings = 0; halvings < 20; ++halvings) {
        const Complex<Scalar> cand(t.real() + damp * step(0),
                                   t.imag() + damp * step(1));
        if (std::abs(value(cand)) < std::abs(f)) {
          t = cand;
          moved = true;
          break;
        }
        damp /= Scalar(2);
      }
      if (!moved) break;
    }
    const Scalar res = residual_for(t);
    if (res < best_res) {
      best_res = res;
      best_t = t;
    }
    if (best_res < det_cut) break;
  }
  return accept(best_t);
}

namespace detail {

template <typename Scalar>
Matrix2c<Scalar> block_of(const StateVector<Scalar>& amps, int row) {
  Matrix2c<Scalar> t;
  t << amps(row * 4 + 0), amps(row * 4 + 1), amps(row * 4 + 2),
      amps(row * 4 + 3);
  return t;
}

template <typename Scalar>
Complex<Scalar> det_cross(const Matrix2c<Scalar>& t0,
                          const Matrix2c<Scalar>& t1) {
  return t0(0, 0) * t1(1, 1) + t1(0, 0) * t0(1, 1) - t0(0, 1) * t1(1, 0) -
         t1(0, 1) * t0(1, 0);
}

}  // namespace detail

// Exact 3-qubit canonical form: a qubit-1 unitary zeroing the determinant of
// the i1 = 0 amplitude block (root of a quadratic), singular vectors of that
// block aligning qubits 2 and 3, then diagonal phase cleanup. Output support
// is {000, 100, 111, 101, 110} with a000 real nonnegative.
template <typename Scalar>
CanonicalForm<Scalar> canonicalize3(const PureState<Scalar>& state,
                                    Scalar tol = Scalar(kDefaultTol)) {
  if (state.n != 3)
    throw std::domain_error("canonicalize3 expects a 3-qubit state");
  std::vector<LocalOperator<Scalar>> ops;
  const Scalar scale = state.max_abs_amp();
  const Scalar det_eps = tol * scale * scale;

  const Matrix2c<Scalar> t0 = detail::block_of(state.amps, 0);
  const Matrix2c<Scalar> t1 = detail::block_of(state.amps, 1);
  const Complex<Scalar> d0 = t0.determinant();
  const Complex<Scalar> d1 = t1.determinant();
  const Complex<Scalar> cross = detail::det_cross(t0, t1);

  // det(alpha T0 + beta T1) = alpha^2 d0 + alpha beta cross + beta^2 d1.
  Complex<Scalar> alpha(1, 0), beta(0, 0);
  if (std::abs(d1) > det_eps) {
    auto roots = detail::quadratic_roots(d1, cross, d0, Scalar(0));
    detail::sort_candidate_roots(roots);
    beta = roots.front();
  } else if (std::abs(cross) > det_eps) {
    beta = -d0 / cross;
  } else if (std::abs(d0) > det_eps) {
    alpha = Complex<Scalar>(0, 0);
    beta = Complex<Scalar>(1, 0);
  }
  const Scalar nrm = std::sqrt(std::norm(alpha) + std::norm(beta));
  alpha /= nrm;
  beta /= nrm;
  Matrix2c<Scalar> u1;
  u1 << alpha, beta, -std::conj(beta), std::conj(alpha);
  ops.push_back(unitary_op(1, u1));
  PureState<Scalar> cur = apply_local(state, ops.back());

  const Matrix2c<Scalar> b0 = detail::block_of(cur.amps, 0);
  if (b0.cwiseAbs().maxCoeff() > tol * cur.max_abs_amp()) {
    Eigen::JacobiSVD<Matrix2c<Scalar>> svd(
        b0, Eigen::ComputeFullU | Eigen::ComputeFullV);
    ops.push_back(unitary_op(2, Matrix2c<Scalar>(svd.matrixU().adjoint())));
    cur = apply_local(cur, ops.back());
    ops.push_back(unitary_op(3, Matrix2c<Scalar>(svd.matrixV().transpose())));
    cur = apply_local(cur, ops.back());
  } else {
    ops.push_back(identity_op<Scalar>(2));
    ops.push_back(identity_op<Scalar>(3));
  }

  // Diagonal phases make a000, a100, a110, a101 real nonnegative.
  const Scalar amp_cut = tol * cur.max_abs_amp();
  auto phase_of = [&](unsigned idx, Scalar accumulated) {
    return std::abs(cur.amp(idx)) > amp_cut
               ? -std::arg(cur.amp(idx)) - accumulated
               : Scalar(0);
  };
  const Scalar phi0 = phase_of(0u, Scalar(0));        // slot 000
  const Scalar th1 = phase_of(4u, phi0);              // slot 100
  const Scalar th2 = phase_of(6u, phi0 + th1);        // slot 110
  const Scalar th3 = phase_of(5u, phi0 + th1);        // slot 101
  auto phase_op = [](int qubit, Scalar lo, Scalar hi) {
    Matrix2c<Scalar> m = Matrix2c<Scalar>::Zero();
    m(0, 0) = std::polar(Scalar(1), lo);
    m(1, 1) = std::polar(Scalar(1), hi);
    return unitary_op(qubit, m);
  };
  ops.push_back(phase_op(1, phi0, phi0 + th1));
  cur = apply_local(cur, ops.back());
  ops.push_back(phase_op(2, Scalar(0), th2));
  cur = apply_local(cur, ops.back());
  ops.push_back(phase_op(3, Scalar(0), th3));
  cur = apply_local(cur, ops.back());

  CanonicalForm<Scalar> form;
  form.state = std::move(cur);
  form.ops = std::move(ops);
  form.objective = objective_of(form.state, tol);
  form.lbp_count = form.objective.lbp;
  return form;
}

namespace detail {

template <typename Scalar>
Matrix2c<Scalar> unitary_from_params(Scalar theta, Scalar phi, Scalar chi) {
  const Scalar c = std::cos(theta);
  const Scalar s = std::sin(theta);
  Matrix2c<Scalar> u;
  u << c * std::polar(Scalar(1), phi), s * std::polar(Scalar(1), chi),
      -s * std::polar(Scalar(1), -chi), c * std::polar(Scalar(1), -phi);
  return u;
}

template <typename Scalar>
StateVector<Scalar> apply_params(const PureState<Scalar>& state,
                                 const std::vector<Scalar>& params) {
  PureState<Scalar> cur = state;
  for (int m = 1; m <= state.n; ++m) {
    const std::size_t at = static_cast<std::size_t>(3 * (m - 1));
    const LocalOperator<Scalar> op{
        m, unitary_from_params(params[at], params[at + 1], params[at + 2]),
        OpKind::Unitary};
    cur.amps = transformed_amplitudes(cur, op);
  }
  return cur.amps;
}

// Smooth search surrogate: an L1-style sparsity term minus a small reward
// that shifts determinant mass toward high font orders.
template <typename Scalar>
Scalar smooth_objective(const PureState<Scalar>& input,
                        const std::vector<Scalar>& params) {
  const int n = input.n;
  PureState<Scalar> cur{n, apply_params(input, params)};
  Scalar l1 = Scalar(0);
  const Scalar eps2 = Scalar(1e-18);
  for (Eigen::Index i = 0; i < cur.amps.size(); ++i)
    l1 += std::sqrt(std::norm(cur.amps(i)) + eps2);
  Scalar reward = Scalar(0);
  const unsigned columns = 1u << (n - 1);
  const Scalar base = Scalar(1e-3) / std::pow(Scalar(4), Scalar(n));
  for (int p = 1; p <= n; ++p)
    for (unsigned c1 = 0; c1 + 1 < columns; ++c1)
      for (unsigned c2 = c1 + 1; c2 < columns; ++c2) {
        const int k = std::popcount(c1 ^ c2) + 1;
        const Complex<Scalar> d =
            cur.amp(full_index(n, p, 0, c1)) * cur.amp(full_index(n, p, 1, c2)) -
            cur.amp(full_index(n, p, 1, c1)) * cur.amp(full_index(n, p, 0, c2));
        reward += base * std::pow(Scalar(4), Scalar(k)) * std::norm(d);
      }
  return l1 - reward;
}

template <typename Scalar, typename F>
std::vector<Scalar> nelder_mead(F&& f, std::vector<Scalar> x0, Scalar step,
                                int max_iter, Scalar ftol) {
  const std::size_t d = x0.size();
  std::vector<std::vector<Scalar>> xs(d + 1, x0);
  for (std::size_t i = 0; i < d; ++i) xs[i + 1][i] += step;
  std::vector<Scalar> fs(d + 1);
  for (std::size_t i = 0; i <= d; ++i) fs[i] = f(xs[i]);

  std::vector<std::size_t> order(d + 1);
  for (int iter = 0; iter < max_iter; ++iter) {
    for (std::size_t i = 0; i <= d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    const std::size_t best = order[0], worst = order[d], second = order[d - 1];
    if (fs[worst] - fs[best] < ftol) break;

    std::vector<Scalar> centroid(d, Scalar(0));
    for (std::size_t i = 0; i <= d; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < d; ++k) centroid[k] += xs[i][k];
    for (std::size_t k = 0; k < d; ++k) centroid[k] /= Scalar(d);

    auto combine = [&](Scalar coeff) {
      std::vector<Scalar> y(d);
      for (std::size_t k = 0; k < d; ++k)
        y[k] = centroid[k] + coeff * (xs[worst][k] - centroid[k]);
      return y;
    };

    auto reflected = combine(Scalar(-1));
    const Scalar fr = f(reflected);
    if (fr < fs[best]) {
      auto expanded = combine(Scalar(-2));
      const Scalar fe = f(expanded);
      if (fe < fr) {
        xs[worst] = std::move(expanded);
        fs[worst] = fe;
      } else {
        xs[worst] = std::move(reflected);
        fs[worst] = fr;
      }
      continue;
    }
    if (fr < fs[second]) {
      xs[worst] = std::move(reflected);
      fs[worst] = fr;
      continue;
    }
    auto contracted = combine(fr < fs[worst] ? Scalar(-0.5) : Scalar(0.5));
    const Scalar fc = f(contracted);
    if (fc < std::min(fr, fs[worst])) {
      xs[worst] = std::move(contracted);
      fs[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < d; ++k)
        xs[i][k] = xs[best][k] + Scalar(0.5) * (xs[i][k] - xs[best][k]);
      fs[i] = f(xs[i]);
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= d; ++i)
    if (fs[i] < fs[best]) best = i;
  return xs[best];
}

// Support splits worth polishing: positions of the largest magnitude gaps.
template <typename Scalar>
std::vector<std::vector<char>> candidate_supports(const StateVector<Scalar>& amps) {
  const Eigen::Index dim = amps.size();
  std::vector<std::pair<Scalar, Eigen::Index>> mags;
  for (Eigen::Index i = 0; i < dim; ++i) mags.emplace_back(std::abs(amps(i)), i);
  std::sort(mags.rbegin(), mags.rend());
  std::vector<std::pair<Scalar, Eigen::Index>> gaps;  // (ratio, support size)
  for (Eigen::Index k = 1; k < dim; ++k) {
    const Scalar hi = mags[static_cast<std::size_t>(k - 1)].first;
    const Scalar lo = mags[static_cast<std::size_t>(k)].first;
    if (hi <= Scalar(0)) break;
    const Scalar ratio = lo > Scalar(0) ? hi / lo : Scalar(1e30);
    if (ratio > Scalar(25)) gaps.emplace_back(ratio, k);
  }
  std::sort(gaps.rbegin(), gaps.rend());
  std::vector<std::vector<char>> supports;
  for (std::size_t g = 0; g < gaps.size() && g < 3; ++g) {
    std::vector<char> mask(static_cast<std::size_t>(dim), 0);
    for (Eigen::Index k = 0; k < gaps[g].second; ++k)
      mask[static_cast<std::size_t>(mags[static_cast<std::size_t>(k)].second)] = 1;
    supports.push_back(std::move(mask));
  }
  return supports;
}

// Levenberg-Marquardt refinement driving the off-support amplitudes to zero.
template <typename Scalar>
std::optional<std::vector<Scalar>> polish_support(
    const PureState<Scalar>& input, std::vector<Scalar> params,
    const std::vector<char>& support) {
  std::vector<Eigen::Index> off;
  for (std::size_t i = 0; i < support.size(); ++i)
    if (!support[i]) off.push_back(static_cast<Eigen::Index>(i));
  if (off.empty()) return params;
  const int d = static_cast<int>(params.size());
  const int m = 2 * static_cast<int>(off.size());

  auto residual = [&](const std::vector<Scalar>& x) {
    const StateVector<Scalar> amps = apply_params(input, x);
    Eigen::Vector<Scalar, Eigen::Dynamic> r(m);
    for (std::size_t k = 0; k < off.size(); ++k) {
      r(2 * static_cast<Eigen::Index>(k)) = amps(off[k]).real();
      r(2 * static_cast<Eigen::Index>(k) + 1) = amps(off[k]).imag();
    }
    return r;
  };

  Scalar lambda = Scalar(1e-6);
  Eigen::Vector<Scalar, Eigen::Dynamic> r = residual(params);
  for (int iter = 0; iter < 40; ++iter) {
    if (r.template lpNorm<Eigen::Infinity>() < Scalar(1e-13)) return params;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> jac(m, d);
    const Scalar h = Scalar(1e-6);
    for (int c = 0; c < d; ++c) {
      auto hi = params, lo = params;
      hi[static_cast<std::size_t>(c)] += h;
      lo[static_cast<std::size_t>(c)] -= h;
      jac.col(c) = (residual(hi) - residual(lo)) / (Scalar(2) * h);
    }
    const auto jtj = (jac.transpose() * jac).eval();
    const auto jtr = (jac.transpose() * r).eval();
    bool stepped = false;
    for (int tries = 0; tries < 8; ++tries) {
      auto damped = jtj;
      for (int c = 0; c < d; ++c) damped(c, c) += lambda;
      const Eigen::Vector<Scalar, Eigen::Dynamic> delta =
          damped.ldlt().solve(-jtr);
      auto next = params;
      for (int c = 0; c < d; ++c) next[static_cast<std::size_t>(c)] += delta(c);
      const auto rn = residual(next);
      if (rn.squaredNorm() < r.squaredNorm()) {
        params = std::move(next);
        r = rn;
        lambda = std::max(lambda / Scalar(3), Scalar(1e-12));
        stepped = true;
        break;
      }
      lambda *= Scalar(10);
    }
    if (!stepped) break;
  }
  if (r.template lpNorm<Eigen::Infinity>() < Scalar(1e-13)) return params;
  return std::nullopt;
}

// Every amplitude either clearly zero or clearly part of the support.
template <typename Scalar>
bool support_is_clean(const PureState<Scalar>& state, Scalar tol) {
  const Scalar scale = state.max_abs_amp();
  const Scalar lo = tol * scale;
  const Scalar hi = std::sqrt(tol) * scale;
  for (Eigen::Index i = 0; i < state.amps.size(); ++i) {
    const Scalar a = std::abs(state.amps(i));
    if (a > lo && a < hi) return false;
  }
  return true;
}

}  // namespace detail

// Best-effort canonical representative over products of single-qubit
// unitaries: seeded multi-start Nelder-Mead on a sparsity surrogate, followed
// by a least-squares polish that drives the detected zero slots to machine
// precision. The input itself always competes, so the objective never
// worsens and ties keep the incumbent.
template <typename Scalar>
CanonicalForm<Scalar> canonicalize_heuristic(const PureState<Scalar>& state,
                                             int max_restarts = 32,
                                             Scalar tol = Scalar(kDefaultTol),
                                             std::uint64_t seed = 0) {
  if (state.n < 3)
    throw std::domain_error("heuristic canonicalization expects n >= 3");
  if (max_restarts < 1) throw std::domain_error("max_restarts must be positive");

  CanonicalForm<Scalar> best;
  best.state = state;
  best.objective = objective_of(state, tol);
  best.objective_trace.emplace_back(-1, best.objective);

  const int d = 3 * state.n;
  std::mt19937_64 rng(seed);
  auto f = [&](const std::vector<Scalar>& x) {
    return detail::smooth_objective(state, x);
  };

  for (int restart = 0; restart < max_restarts; ++restart) {
    std::vector<Scalar> x0(static_cast<std::size_t>(d), Scalar(0));
    if (restart > 0)
      for (int k = 0; k < d; ++k) {
        const Scalar u = Scalar(detail::uniform_unit(rng));
        x0[static_cast<std::size_t>(k)] =
            k % 3 == 0 ? u * Scalar(1.5707963267948966)
                       : (u - Scalar(0.5)) * Scalar(6.283185307179586);
      }
    const auto x = detail::nelder_mead(f, std::move(x0), Scalar(0.35),
                                       170 * d, Scalar(1e-14));

    std::vector<std::vector<Scalar>> finals;
    finals.push_back(x);
    const StateVector<Scalar> rough = detail::apply_params(state, x);
    for (const auto& support : detail::candidate_supports(rough))
      if (auto polished = detail::polish_support(state, x, support))
        finals.push_back(std::move(*polished));

    for (const auto& cand : finals) {
      PureState<Scalar> moved =
          detail::normalized_state(state.n, detail::apply_params(state, cand));
      const CanonObjective obj = objective_of(moved, tol);
      if (obj < best.objective) {
        best.objective = obj;
        best.state = std::move(moved);
        best.ops.clear();
        for (int m = 1; m <= state.n; ++m) {
          const std::size_t at = static_cast<std::size_t>(3 * (m - 1));
          best.ops.push_back(unitary_op(
              m, detail::unitary_from_params(cand[at], cand[at + 1],
                                             cand[at + 2])));
        }
        best.objective_trace.emplace_back(restart, obj);
      }
    }
  }

  // Phase convention: leading amplitude real nonnegative (via a scalar
  // unitary on qubit 1, so the replay trail stays complete).
  Eigen::Index lead = 0;
  best.state.amps.cwiseAbs().maxCoeff(&lead);
  const Scalar arg = std::arg(best.state.amps(lead));
  if (std::abs(arg) > Scalar(1e-15)) {
    const Complex<Scalar> rot = std::polar(Scalar(1), -arg);
    best.state.amps *= rot;
    best.ops.push_back(
        unitary_op(1, Matrix2c<Scalar>(rot * Matrix2c<Scalar>::Identity())));
  }

  best.lbp_count = best.objective.lbp;
  best.restarts_used = max_restarts;
  best.converged = detail::support_is_clean(best.state, tol);
  return best;
}

// Invertible diag-normalizing reduction on qubit 1: maps the leading column
// pair (a_{00..0}, a_{10..0}) to (1, 0) before renormalization. Applied only
// when it does not worsen the objective; the result is equivalent under
// invertible local operators but not under unitaries alone.
template <typename Scalar>
CanonicalForm<Scalar> slocc_reduce(const CanonicalForm<Scalar>& form,
                                   Scalar tol = Scalar(kDefaultTol)) {
  const PureState<Scalar>& s = form.state;
  const unsigned top = 1u << (s.n - 1);
  const Complex<Scalar> a0 = s.amp(0);
  const Complex<Scalar> a1 = s.amp(top);
  if (std::abs(a0) <= tol * s.max_abs_amp() ||
      std::abs(a1) <= tol * s.max_abs_amp())
    return form;
  Matrix2c<Scalar> m = Matrix2c<Scalar>::Zero();
  m(0, 0) = Scalar(1) / a0;
  m(1, 0) = -a1 / a0;
  m(1, 1) = Complex<Scalar>(1, 0);
  const LocalOperator<Scalar> op = invertible_op(1, m);
  PureState<Scalar> reduced = apply_local(s, op);
  const CanonObjective obj = objective_of(reduced, tol);
  if (form.objective < obj) return form;
  CanonicalForm<Scalar> out = form;
  out.state = std::move(reduced);
  out.ops.push_back(op);
  out.objective = obj;
  out.lbp_count = obj.lbp;
  return out;
}

// (D^{00..0} - D^{0011..1})^2 - 4 D_{q2=0}^{00..0} D_{q2=1}^{00..0}, built
// from the qubit-1 fonts; unchanged by local unitaries on qubits 1 and 2.
template <typename Scalar>
Complex<Scalar> cluster_invariant(const PureState<Scalar>& state) {
  if (state.n < 3)
    throw std::domain_error("cluster invariant expects n >= 3");
  const unsigned columns = 1u << (state.n - 1);
  const unsigned half = 1u << (state.n - 2);
  const Complex<Scalar> d_top = font_det(state, 1, 0u, columns - 1);
  const Complex<Scalar> d_split = font_det(state, 1, half - 1, half);
  const Complex<Scalar> d_s0 = font_det(state, 1, 0u, half - 1);
  const Complex<Scalar> d_s1 = font_det(state, 1, half, columns - 1);
  const Complex<Scalar> diff = d_top - d_split;
  return diff * diff - Scalar(4) * d_s0 * d_s1;
}

}  // namespace negafont
