#include "negafont/report.hpp"

#include <array>
#include <cmath>
#include <cstdio>

namespace negafont {

void JsonWriter::separate() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!levels_.empty() && levels_.back().count++ > 0) out_ += ',';
}

void JsonWriter::begin_object() {
  separate();
  levels_.push_back({true, 0});
  out_ += '{';
}

void JsonWriter::end_object() {
  levels_.pop_back();
  out_ += '}';
}

void JsonWriter::begin_array() {
  separate();
  levels_.push_back({false, 0});
  out_ += '[';
}

void JsonWriter::end_array() {
  levels_.pop_back();
  out_ += ']';
}

void JsonWriter::key(std::string_view name) {
  if (levels_.back().count++ > 0) out_ += ',';
  write_string(name);
  out_ += ':';
  after_key_ = true;
}

void JsonWriter::value(double x) {
  separate();
  if (!std::isfinite(x)) {
    out_ += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out_ += buf;
}

void JsonWriter::value(long long x) {
  separate();
  out_ += std::to_string(x);
}

void JsonWriter::value(bool b) {
  separate();
  out_ += b ? "true" : "false";
}

void JsonWriter::value(std::string_view s) {
  separate();
  write_string(s);
}

void JsonWriter::write_string(std::string_view s) {
  out_ += '"';
  for (char c : s) {
    switch (c) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\t': out_ += "\\t"; break;
      case '\r': out_ += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out_ += buf;
        } else {
          out_ += c;
        }
    }
  }
  out_ += '"';
}

void JsonWriter::complex_value(const std::complex<double>& z) {
  begin_object();
  key("re");
  value(z.real());
  key("im");
  value(z.imag());
  end_object();
}

namespace {

void write_version(JsonWriter& w) {
  w.key("version");
  w.value(kSchemaVersion);
}

void write_census(JsonWriter& w, const FontCensus<double>& census) {
  w.begin_object();
  for (const auto& [k, count] : census.counts) {
    w.key(std::to_string(k));
    w.value(count);
  }
  w.end_object();
}

void write_matrix2(JsonWriter& w, const Matrix2c<double>& m) {
  w.begin_array();
  for (int r = 0; r < 2; ++r) {
    w.begin_array();
    for (int c = 0; c < 2; ++c) w.complex_value(m(r, c));
    w.end_array();
  }
  w.end_array();
}

void write_objective(JsonWriter& w, const CanonObjective& obj) {
  w.begin_object();
  w.key("lbp");
  w.value(obj.lbp);
  w.key("max_order");
  w.value(-obj.neg_max_order);
  w.key("font_count");
  w.value(obj.font_count);
  w.end_object();
}

void write_ops(JsonWriter& w, const std::vector<LocalOperator<double>>& ops) {
  w.begin_array();
  for (const auto& op : ops) {
    w.begin_object();
    w.key("qubit");
    w.value(op.qubit);
    w.key("matrix");
    write_matrix2(w, op.matrix);
    w.key("kind");
    w.value(op.kind == OpKind::Unitary ? "unitary" : "invertible");
    w.end_object();
  }
  w.end_array();
}

void write_canonicalization(JsonWriter& w, const ClassReport<double>& report) {
  w.begin_object();
  w.key("method");
  w.value(report.canonical_method);
  w.key("lbp_count");
  w.value(report.canonical.lbp_count);
  w.key("objective");
  write_objective(w, report.canonical.objective);
  w.key("restarts_used");
  w.value(report.canonical.restarts_used);
  w.key("converged");
  w.value(report.canonical.converged);
  w.end_object();
}

}  // namespace

std::string report_classify(const ClassReport<double>& report) {
  JsonWriter w;
  w.begin_object();
  write_version(w);
  w.key("n");
  w.value(report.n);
  w.key("class");
  w.value(report.class_label);
  w.key("subclass");
  w.begin_object();
  for (int k = report.n; k >= 2; --k) {
    w.key("N" + std::to_string(k));
    w.value(report.subclass.at(k));
  }
  w.end_object();
  w.key("per_qubit");
  w.begin_array();
  for (const auto& view : report.per_qubit) {
    w.begin_object();
    w.key("qubit");
    w.value(view.signature.p);
    w.key("signature");
    w.begin_array();
    for (int k : view.signature.ks) w.value(k);
    w.end_array();
    w.key("census");
    write_census(w, view.census);
    w.key("negativity");
    w.value(view.negativity);
    w.key("kpt_negativity");
    w.begin_object();
    for (const auto& [k, neg] : view.kpt_negativity) {
      w.key(std::to_string(k));
      w.value(neg);
    }
    w.end_object();
    w.end_object();
  }
  w.end_array();
  if (report.tau3) {
    w.key("tau3");
    w.value(*report.tau3);
  }
  w.key("separable_qubits");
  w.begin_array();
  for (int q : report.separable_qubits) w.value(q);
  w.end_array();
  w.key("fully_separable");
  w.value(report.fully_separable);
  w.key("genuine");
  w.value(report.genuine);
  w.key("signatures_disagree");
  w.value(report.signatures_disagree);
  w.key("headline_qubit");
  w.value(report.headline_qubit);
  w.key("canonicalization");
  write_canonicalization(w, report);
  w.key("provisional");
  w.value(report.provisional);
  w.end_object();
  return w.take();
}

std::string report_canonical(const CanonicalForm<double>& form,
                             bool slocc_applied) {
  JsonWriter w;
  w.begin_object();
  write_version(w);
  w.key("n");
  w.value(form.state.n);
  w.key("canonical_amps");
  w.begin_array();
  for (Eigen::Index i = 0; i < form.state.amps.size(); ++i)
    w.complex_value(form.state.amps(i));
  w.end_array();
  w.key("lbp_count");
  w.value(form.lbp_count);
  w.key("ops");
  write_ops(w, form.ops);
  w.key("objective");
  write_objective(w, form.objective);
  w.key("restarts_used");
  w.value(form.restarts_used);
  w.key("converged");
  w.value(form.converged);
  w.key("slocc_applied");
  w.value(slocc_applied);
  w.end_object();
  return w.take();
}

std::string report_fonts(const PureState<double>& state, int qubit,
                         const std::vector<NegativityFont<double>>& fonts,
                         const FontCensus<double>& census) {
  JsonWriter w;
  w.begin_object();
  write_version(w);
  w.key("n");
  w.value(state.n);
  w.key("qubit");
  w.value(qubit);
  w.key("fonts");
  w.begin_array();
  for (const auto& font : fonts) {
    w.begin_object();
    w.key("order");
    w.value(font.order);
    w.key("flips");
    w.begin_array();
    for (int q : font.flips) w.value(q);
    w.end_array();
    w.key("spectators");
    w.begin_array();
    for (const auto& [q, bit] : font.spectators) {
      w.begin_object();
      w.key("qubit");
      w.value(q);
      w.key("bit");
      w.value(bit);
      w.end_object();
    }
    w.end_array();
    w.key("base_column");
    w.value(font.base_column);
    w.key("other_column");
    w.value(font.other_column);
    w.key("entries");
    write_matrix2(w, font.entries);
    w.key("det");
    w.complex_value(font.det);
    w.key("abs_det");
    w.value(std::abs(font.det));
    w.end_object();
  }
  w.end_array();
  w.key("census");
  write_census(w, census);
  w.key("total_sq");
  w.value(census.total_sq);
  w.end_object();
  return w.take();
}

std::string report_transpose(int n, int qubit, std::optional<int> k,
                             double negativity, double residual_max_abs,
                             const OperatorMatrix<double>* matrix) {
  JsonWriter w;
  w.begin_object();
  write_version(w);
  w.key("n");
  w.value(n);
  w.key("qubit");
  w.value(qubit);
  w.key("kind");
  w.value(k ? "kway" : "global");
  if (k) {
    w.key("k");
    w.value(*k);
  }
  w.key("negativity");
  w.value(negativity);
  w.key("residual_max_abs");
  w.value(residual_max_abs);
  if (matrix) {
    w.key("matrix");
    w.begin_array();
    for (Eigen::Index r = 0; r < matrix->rows(); ++r) {
      w.begin_array();
      for (Eigen::Index c = 0; c < matrix->cols(); ++c)
        w.complex_value((*matrix)(r, c));
      w.end_array();
    }
    w.end_array();
  }
  w.end_object();
  return w.take();
}

std::string report_negativity(
    int n, const std::vector<std::pair<int, double>>& per_qubit) {
  JsonWriter w;
  w.begin_object();
  write_version(w);
  w.key("n");
  w.value(n);
  w.key("per_qubit");
  w.begin_array();
  for (const auto& [qubit, neg] : per_qubit) {
    w.begin_object();
    w.key("qubit");
    w.value(qubit);
    w.key("negativity");
    w.value(neg);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

std::string report_invariants(int n, std::optional<double> tau3,
                              const std::complex<double>& cluster,
                              const std::vector<std::array<double, 3>>& font_sum) {
  JsonWriter w;
  w.begin_object();
  write_version(w);
  w.key("n");
  w.value(n);
  if (tau3) {
    w.key("tau3");
    w.value(*tau3);
  }
  w.key("cluster_invariant");
  w.complex_value(cluster);
  w.key("font_sum");
  w.begin_array();
  for (const auto& row : font_sum) {
    w.begin_object();
    w.key("qubit");
    w.value(static_cast<int>(row[0]));
    w.key("negativity_sq");
    w.value(row[1]);
    w.key("four_sum_sq");
    w.value(row[2]);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

std::string report_count(int n, long long major, long long types) {
  JsonWriter w;
  w.begin_object();
  write_version(w);
  w.key("n");
  w.value(n);
  w.key("major_classes");
  w.value(major);
  w.key("n_partite_types");
  w.value(types);
  w.end_object();
  return w.take();
}

std::string report_error(std::string_view type, std::string_view message,
                         std::optional<std::size_t> offset,
                         std::optional<long long> line) {
  JsonWriter w;
  w.begin_object();
  write_version(w);
  w.key("error");
  w.begin_object();
  w.key("type");
  w.value(type);
  w.key("message");
  w.value(message);
  if (offset) {
    w.key("offset");
    w.value(static_cast<long long>(*offset));
  }
  w.end_object();
  if (line) {
    w.key("line");
    w.value(*line);
  }
  w.end_object();
  return w.take();
}

}  // namespace negafont
