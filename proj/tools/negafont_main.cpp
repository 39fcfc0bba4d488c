// negafont: classify multiqubit pure states by the coherence structure of
// partial transposes, enumerate negativity fonts, and compute the related
// invariants. Input states use the ket-expression grammar from ketparse.
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "negafont/canonical.hpp"
#include "negafont/classify.hpp"
#include "negafont/fonts.hpp"
#include "negafont/ketparse.hpp"
#include "negafont/negativity.hpp"
#include "negafont/report.hpp"
#include "negafont/state.hpp"
#include "negafont/transpose.hpp"

namespace {

using negafont::CanonicalForm;
using negafont::ClassReport;
using negafont::FontCensus;
using negafont::InvalidStateError;
using negafont::NumericError;
using negafont::ParseError;
using negafont::PureState;

constexpr int kExitParse = 1;
constexpr int kExitInvalidState = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitBadFlags = 4;

struct Options {
  std::string state_text;
  std::string file_path;
  double tol = 1e-10;
  bool json = false;
  std::uint64_t seed = 0;
  int restarts = 32;
  bool assume_canonical = false;
  bool slocc = false;
  bool dump = false;
  int qubit = 0;
  int k = 0;
  int n = 0;
};

std::string hfmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string cfmt(const std::complex<double>& z) {
  return "(" + hfmt(z.real()) + (z.imag() < 0 ? "" : "+") + hfmt(z.imag()) +
         "i)";
}

ClassReport<double> classify_state(const PureState<double>& state,
                                   const Options& opt) {
  if (state.n == 3)
    return negafont::classify3(state, opt.tol, opt.assume_canonical);
  return negafont::classify4(state, opt.tol, opt.assume_canonical,
                             opt.restarts, opt.seed);
}

void print_classify_human(const ClassReport<double>& report) {
  std::printf("class: %s\n", report.class_label.c_str());
  std::printf("n: %d  headline qubit: %d\n", report.n, report.headline_qubit);
  std::string sub = "subclass:";
  for (int k = report.n; k >= 2; --k)
    sub += " N" + std::to_string(k) + "=" +
           std::to_string(report.subclass.at(k));
  std::printf("%s\n", sub.c_str());
  if (report.tau3) std::printf("tau3: %s\n", hfmt(*report.tau3).c_str());
  std::string sep = "separable qubits:";
  if (report.separable_qubits.empty()) sep += " (none)";
  for (int q : report.separable_qubits) sep += " " + std::to_string(q);
  std::printf("%s\n", sep.c_str());
  std::printf("fully separable: %s  genuine: %s  provisional: %s\n",
              report.fully_separable ? "yes" : "no",
              report.genuine ? "yes" : "no",
              report.provisional ? "yes" : "no");
  std::printf(
      "canonicalization: %s (lbp %d, objective (%d,%d,%d), %s)\n",
      report.canonical_method.c_str(), report.canonical.lbp_count,
      report.canonical.objective.lbp, -report.canonical.objective.neg_max_order,
      report.canonical.objective.font_count,
      report.canonical.converged ? "converged" : "not converged");
  std::printf("%-6s %-12s %-16s %-22s %s\n", "qubit", "signature", "census",
              "negativity", "kpt negativity");
  for (const auto& view : report.per_qubit) {
    std::string sig = "{";
    for (std::size_t i = 0; i < view.signature.ks.size(); ++i)
      sig += (i ? "," : "") + std::to_string(view.signature.ks[i]);
    sig += "}";
    std::string census;
    for (const auto& [k, c] : view.census.counts)
      census += std::to_string(k) + ":" + std::to_string(c) + " ";
    std::string kpt;
    for (const auto& [k, neg] : view.kpt_negativity)
      kpt += "K" + std::to_string(k) + "=" + hfmt(neg) + " ";
    std::printf("%-6d %-12s %-16s %-22s %s\n", view.signature.p, sig.c_str(),
                census.c_str(), hfmt(view.negativity).c_str(), kpt.c_str());
  }
}

int run_classify_single(const Options& opt) {
  const PureState<double> state = negafont::parse_state(opt.state_text);
  if (state.n != 3 && state.n != 4) {
    std::cerr << "classify supports 3- or 4-qubit states (got n = "
              << state.n << ")\n";
    return kExitBadFlags;
  }
  const ClassReport<double> report = classify_state(state, opt);
  if (opt.json)
    std::printf("%s\n", negafont::report_classify(report).c_str());
  else
    print_classify_human(report);
  return 0;
}

std::string classify_line(const std::string& raw, long long line_no,
                          const Options& opt) {
  const auto text = negafont::expression_line(raw);
  if (!text) return {};
  try {
    const PureState<double> state = negafont::parse_state(*text);
    if (state.n != 3 && state.n != 4)
      return negafont::report_error("unsupported",
                                    "classify supports 3- or 4-qubit states",
                                    std::nullopt, line_no);
    return negafont::report_classify(classify_state(state, opt));
  } catch (const ParseError& e) {
    return negafont::report_error("parse", e.what(), e.offset(), line_no);
  } catch (const InvalidStateError& e) {
    return negafont::report_error("invalid_state", e.what(), std::nullopt,
                                  line_no);
  } catch (const NumericError& e) {
    return negafont::report_error("numeric", e.what(), std::nullopt, line_no);
  } catch (const std::exception& e) {
    return negafont::report_error("internal", e.what(), std::nullopt, line_no);
  }
}

int run_classify_batch(const Options& opt) {
  std::ifstream in(opt.file_path);
  if (!in) {
    std::cerr << "cannot open file: " << opt.file_path << "\n";
    return kExitBadFlags;
  }
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);

  std::vector<std::string> outputs(lines.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= lines.size()) return;
      outputs[i] =
          classify_line(lines[i], static_cast<long long>(i) + 1, opt);
    }
  };
  unsigned pool = std::max(1u, std::thread::hardware_concurrency());
  pool = std::min({pool, 8u, static_cast<unsigned>(lines.size())});
  if (pool > 1) {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < pool; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  } else {
    worker();
  }
  for (const auto& out : outputs)
    if (!out.empty()) std::printf("%s\n", out.c_str());
  return 0;
}

int run_fonts(const Options& opt) {
  const PureState<double> state = negafont::parse_state(opt.state_text);
  const auto fonts = negafont::enumerate_fonts(state, opt.qubit, opt.k);
  const FontCensus<double> census =
      negafont::font_census(state, opt.qubit, opt.tol);
  if (opt.json) {
    std::printf("%s\n",
                negafont::report_fonts(state, opt.qubit, fonts, census).c_str());
    return 0;
  }
  std::printf("fonts for qubit %d (n = %d)\n", opt.qubit, state.n);
  std::printf("%-6s %-12s %-14s %-10s %-44s %s\n", "order", "flips",
              "spectators", "columns", "det", "|det|");
  for (const auto& font : fonts) {
    std::string flips, spect;
    for (std::size_t i = 0; i < font.flips.size(); ++i)
      flips += (i ? "," : "") + std::to_string(font.flips[i]);
    for (const auto& [q, bit] : font.spectators)
      spect += "q" + std::to_string(q) + "=" + std::to_string(bit) + " ";
    if (spect.empty()) spect = "-";
    const std::string cols =
        std::to_string(font.base_column) + "," + std::to_string(font.other_column);
    std::printf("%-6d %-12s %-14s %-10s %-44s %s\n", font.order, flips.c_str(),
                spect.c_str(), cols.c_str(), cfmt(font.det).c_str(),
                hfmt(std::abs(font.det)).c_str());
  }
  std::string census_line = "census:";
  for (const auto& [k, c] : census.counts)
    census_line += " " + std::to_string(k) + "-way=" + std::to_string(c);
  std::printf("%s  (total fonts listed: %zu)\n", census_line.c_str(),
              fonts.size());
  std::printf("sum of squared determinants: %s\n",
              hfmt(census.total_sq).c_str());
  return 0;
}

int run_transpose(const Options& opt) {
  const PureState<double> state = negafont::parse_state(opt.state_text);
  const auto rho = negafont::density(state);
  const auto pt = opt.k ? negafont::kway_pt(rho, opt.qubit, opt.k)
                        : negafont::global_pt(rho, opt.qubit);
  const double neg = negafont::negativity_of(pt, opt.tol);
  const auto residual = negafont::decomposition_residual(rho, opt.qubit);
  const std::optional<int> k =
      opt.k ? std::optional<int>(opt.k) : std::nullopt;
  if (opt.json) {
    std::printf("%s\n",
                negafont::report_transpose(state.n, opt.qubit, k, neg,
                                           residual.max_abs,
                                           opt.dump ? &pt.mat : nullptr)
                    .c_str());
    return 0;
  }
  if (opt.k)
    std::printf("%d-way partial transpose at qubit %d\n", opt.k, opt.qubit);
  else
    std::printf("global partial transpose at qubit %d\n", opt.qubit);
  std::printf("negativity: %s\n", hfmt(neg).c_str());
  std::printf("decomposition residual max |entry|: %s\n",
              hfmt(residual.max_abs).c_str());
  if (opt.dump) {
    for (Eigen::Index r = 0; r < pt.mat.rows(); ++r) {
      std::string row;
      for (Eigen::Index c = 0; c < pt.mat.cols(); ++c)
        row += cfmt(pt.mat(r, c)) + " ";
      std::printf("%s\n", row.c_str());
    }
  }
  return 0;
}

int run_negativity(const Options& opt) {
  const PureState<double> state = negafont::parse_state(opt.state_text);
  std::vector<std::pair<int, double>> per_qubit;
  if (opt.qubit) {
    per_qubit.emplace_back(
        opt.qubit, negafont::global_negativity(state, opt.qubit, opt.tol));
  } else {
    for (int p = 1; p <= state.n; ++p)
      per_qubit.emplace_back(p,
                             negafont::global_negativity(state, p, opt.tol));
  }
  if (opt.json) {
    std::printf("%s\n",
                negafont::report_negativity(state.n, per_qubit).c_str());
    return 0;
  }
  for (const auto& [p, neg] : per_qubit)
    std::printf("qubit %d: negativity %s\n", p, hfmt(neg).c_str());
  return 0;
}

int run_canonicalize(const Options& opt) {
  const PureState<double> state = negafont::parse_state(opt.state_text);
  CanonicalForm<double> form;
  if (state.n == 3)
    form = negafont::canonicalize3(state, opt.tol);
  else if (state.n >= 4)
    form = negafont::canonicalize_heuristic(state, opt.restarts, opt.tol,
                                            opt.seed);
  else {
    std::cerr << "canonicalize supports states of 3 or more qubits\n";
    return kExitBadFlags;
  }
  if (opt.slocc) form = negafont::slocc_reduce(form, opt.tol);
  if (opt.json) {
    std::printf("%s\n", negafont::report_canonical(form, opt.slocc).c_str());
    return 0;
  }
  std::printf("canonical state: %s\n",
              negafont::print_state(form.state).c_str());
  std::printf("lbp count: %d\n", form.lbp_count);
  std::printf("objective: (%d,%d,%d)\n", form.objective.lbp,
              -form.objective.neg_max_order, form.objective.font_count);
  std::printf("ops applied: %zu\n", form.ops.size());
  std::printf("restarts used: %d  converged: %s\n", form.restarts_used,
              form.converged ? "yes" : "no");
  return 0;
}

int run_invariants(const Options& opt) {
  const PureState<double> state = negafont::parse_state(opt.state_text);
  if (state.n < 3) {
    std::cerr << "invariants supports states of 3 or more qubits\n";
    return kExitBadFlags;
  }
  std::optional<double> tau3;
  if (state.n == 3) tau3 = negafont::three_tangle(state);
  const std::complex<double> cluster = negafont::cluster_invariant(state);
  std::vector<std::array<double, 3>> font_sum;
  for (int p = 1; p <= state.n; ++p) {
    const auto [lhs, rhs] = negafont::font_total_identity(state, p);
    font_sum.push_back({static_cast<double>(p), lhs, rhs});
  }
  if (opt.json) {
    std::printf(
        "%s\n",
        negafont::report_invariants(state.n, tau3, cluster, font_sum).c_str());
    return 0;
  }
  if (tau3) std::printf("tau3: %s\n", hfmt(*tau3).c_str());
  std::printf("cluster invariant: %s\n", cfmt(cluster).c_str());
  double gap = 0;
  for (const auto& row : font_sum) {
    std::printf("qubit %d: negativity^2 %s  4*sum|det|^2 %s\n",
                static_cast<int>(row[0]), hfmt(row[1]).c_str(),
                hfmt(row[2]).c_str());
    gap = std::max(gap, std::abs(row[1] - row[2]));
  }
  std::printf("font-sum identity max gap: %s\n", hfmt(gap).c_str());
  return 0;
}

int run_count(const Options& opt) {
  const auto [major, types] = negafont::count_classes(opt.n);
  if (opt.json) {
    std::printf("%s\n", negafont::report_count(opt.n, major, types).c_str());
    return 0;
  }
  std::printf("major classes: %lld, N-partite types: %lld\n", major, types);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"negativity-font classifier for multiqubit pure states"};
  app.require_subcommand(1);
  Options opt;

  auto add_state = [&](CLI::App* cmd, bool required) {
    auto* o = cmd->add_option("--state", opt.state_text,
                              "ket expression, e.g. \"|000>+|111>\"");
    if (required) o->required();
    return o;
  };
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--tol", opt.tol, "numeric tolerance")
        ->default_val(1e-10);
    cmd->add_flag("--json", opt.json, "emit JSON instead of tables");
  };

  auto* classify = app.add_subcommand("classify", "assign a class label");
  auto* st = add_state(classify, false);
  auto* file = classify->add_option("--file", opt.file_path,
                                    "batch input, one ket per line");
  st->excludes(file);
  add_common(classify);
  classify->add_flag("--canonicalize", "canonicalize first (default)");
  auto* assume = classify->add_flag("--assume-canonical",
                                    opt.assume_canonical,
                                    "treat the input as already canonical");
  assume->excludes("--canonicalize");
  classify->add_option("--seed", opt.seed, "optimizer seed")->default_val(0);
  classify->add_option("--restarts", opt.restarts, "optimizer restarts")
      ->default_val(32);

  auto* fonts = app.add_subcommand("fonts", "list negativity fonts");
  add_state(fonts, true);
  fonts->add_option("--qubit", opt.qubit, "transposed qubit (1-based)")
      ->required();
  fonts->add_option("--k", opt.k, "restrict to K-way fonts");
  add_common(fonts);

  auto* transpose =
      app.add_subcommand("transpose", "partial transpose diagnostics");
  add_state(transpose, true);
  transpose->add_option("--qubit", opt.qubit, "transposed qubit (1-based)")
      ->required();
  transpose->add_option("--k", opt.k, "K-way transpose instead of global");
  transpose->add_flag("--dump", opt.dump, "print the transposed matrix");
  add_common(transpose);

  auto* negativity =
      app.add_subcommand("negativity", "global negativity per qubit");
  add_state(negativity, true);
  negativity->add_option("--qubit", opt.qubit,
                         "single qubit (all if omitted)");
  add_common(negativity);

  auto* canonicalize =
      app.add_subcommand("canonicalize", "reduce to a canonical form");
  add_state(canonicalize, true);
  canonicalize->add_option("--restarts", opt.restarts, "optimizer restarts")
      ->default_val(32);
  canonicalize->add_option("--seed", opt.seed, "optimizer seed")
      ->default_val(0);
  canonicalize->add_flag("--slocc", opt.slocc,
                         "apply the invertible diagonal reduction");
  add_common(canonicalize);

  auto* invariants =
      app.add_subcommand("invariants", "polynomial invariants and checks");
  add_state(invariants, true);
  add_common(invariants);

  auto* count = app.add_subcommand("count", "class counting formulas");
  count->add_option("--n", opt.n, "number of qubits")
      ->required()
      ->check(CLI::Range(2, 62));
  count->add_flag("--json", opt.json, "emit JSON instead of text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadFlags;
  }

  try {
    if (classify->parsed()) {
      if (!opt.file_path.empty()) return run_classify_batch(opt);
      if (opt.state_text.empty()) {
        std::cerr << "classify requires --state or --file\n";
        return kExitBadFlags;
      }
      return run_classify_single(opt);
    }
    if (fonts->parsed()) return run_fonts(opt);
    if (transpose->parsed()) return run_transpose(opt);
    if (negativity->parsed()) return run_negativity(opt);
    if (canonicalize->parsed()) return run_canonicalize(opt);
    if (invariants->parsed()) return run_invariants(opt);
    if (count->parsed()) return run_count(opt);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitParse;
  } catch (const InvalidStateError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalidState;
  } catch (const NumericError& e) {
    std::cerr << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::domain_error& e) {
    std::cerr << e.what() << "\n";
    return kExitBadFlags;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitBadFlags;
}
