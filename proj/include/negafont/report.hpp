// JSON serialization of reports. Hand-rolled writer so every double is
// emitted with 17 significant digits (round-trip exact), schema version
// "negafont/1".
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "negafont/canonical.hpp"
#include "negafont/classify.hpp"
#include "negafont/fonts.hpp"
#include "negafont/state.hpp"

namespace negafont {

inline constexpr std::string_view kSchemaVersion = "negafont/1";

class JsonWriter {
 public:
  void begin_object();
  void end_object();
  void begin_array();
  void end_array();
  void key(std::string_view name);
  void value(double x);
  void value(long long x);
  void value(int x) { value(static_cast<long long>(x)); }
  void value(unsigned x) { value(static_cast<long long>(x)); }
  void value(bool b);
  void value(std::string_view s);
  // String literals otherwise decay to the bool overload.
  void value(const char* s) { value(std::string_view(s)); }
  void complex_value(const std::complex<double>& z);  // {"re":…,"im":…}
  std::string take() { return std::move(out_); }

 private:
  void separate();
  void write_string(std::string_view s);
  std::string out_;
  struct Level {
    bool is_object;
    int count;
  };
  std::vector<Level> levels_;
  bool after_key_ = false;
};

std::string report_classify(const ClassReport<double>& report);
std::string report_canonical(const CanonicalForm<double>& form,
                             bool slocc_applied);
std::string report_fonts(const PureState<double>& state, int qubit,
                         const std::vector<NegativityFont<double>>& fonts,
                         const FontCensus<double>& census);
std::string report_transpose(int n, int qubit, std::optional<int> k,
                             double negativity, double residual_max_abs,
                             const OperatorMatrix<double>* matrix);
std::string report_negativity(int n,
                              const std::vector<std::pair<int, double>>& per_qubit);
std::string report_invariants(int n, std::optional<double> tau3,
                              const std::complex<double>& cluster,
                              const std::vector<std::array<double, 3>>& font_sum);
std::string report_count(int n, long long major, long long types);
std::string report_error(std::string_view type, std::string_view message,
                         std::optional<std::size_t> offset,
                         std::optional<long long> line);

}  // namespace negafont
