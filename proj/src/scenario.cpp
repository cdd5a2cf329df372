#include "qjcm/scenario.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "qjcm/errors.hpp"

namespace qjcm {

namespace {

constexpr std::array kKeys{"kind",    "q",        "k",     "p",     "lambda", "mu",       "omega",
                           "omega0",  "delta_over_omega", "g", "m",     "alpha_sq", "phi",
                           "z_sq",    "theta",    "gt_max", "n_points", "tail_tol", "oracle_tol"};

constexpr std::array kKinds{DeformationKind::Standard, DeformationKind::ArikCoon,
                            DeformationKind::PensonSolomon, DeformationKind::Quesne,
                            DeformationKind::Kerr, DeformationKind::GeneralQ};

bool known_key(std::string_view key) {
  for (const char* k : kKeys) {
    if (key == k) return true;
  }
  return false;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Where each key appeared, for error messages.
using KeyLines = std::map<std::string, std::size_t, std::less<>>;

std::string at_line(const KeyLines* lines, std::string_view key) {
  if (lines == nullptr) return {};
  const auto it = lines->find(key);
  if (it == lines->end()) return {};
  return "line " + std::to_string(it->second) + ": ";
}

[[noreturn]] void invalid(const KeyLines* lines, std::string_view key, const std::string& message) {
  throw ValidationError(at_line(lines, key) + message);
}

bool uses_q(DeformationKind kind) {
  return kind == DeformationKind::ArikCoon || kind == DeformationKind::PensonSolomon ||
         kind == DeformationKind::Quesne || kind == DeformationKind::GeneralQ;
}

void check(const Scenario& s, const KeyLines* lines) {
  DeformationSpec spec = DeformationSpec::standard();
  try {
    spec = s.spec();
  } catch (const Error& e) {
    const char* key = s.kind == DeformationKind::Kerr ? "k" : "q";
    invalid(lines, key, e.what());
  }

  const auto finite = [&](double v, const char* key) {
    if (!std::isfinite(v)) invalid(lines, key, std::string(key) + " must be finite");
  };
  finite(s.phi, "phi");
  finite(s.theta, "theta");
  if (s.omega0.has_value() == s.delta_over_omega.has_value()) {
    invalid(lines, s.omega0 ? "omega0" : "delta_over_omega",
            "exactly one of omega0 and delta_over_omega must be given");
  }
  if (!(s.omega > 0.0) || !std::isfinite(s.omega)) invalid(lines, "omega", "omega must be finite and > 0");
  if (s.omega0) finite(*s.omega0, "omega0");
  if (s.delta_over_omega) finite(*s.delta_over_omega, "delta_over_omega");
  if (!(s.g > 0.0) || !std::isfinite(s.g)) invalid(lines, "g", "g must be finite and > 0 (time grid is in units of 1/g)");
  if (s.m < 1) invalid(lines, "m", "m must be >= 1");
  if (!(s.alpha_sq >= 0.0 && s.alpha_sq <= 1.0)) invalid(lines, "alpha_sq", "alpha_sq must lie in [0, 1]");
  if (!(s.z_sq >= 0.0) || !std::isfinite(s.z_sq)) invalid(lines, "z_sq", "z_sq must be finite and >= 0");
  const double radius = convergence_radius(spec);
  if (!(s.z_sq < radius)) {
    std::ostringstream msg;
    msg << kind_keyword(s.kind) << " with q=" << format_double(s.q) << " requires z_sq < "
        << format_double(radius);
    invalid(lines, "z_sq", msg.str());
  }
  if (!(s.gt_max > 0.0) || !std::isfinite(s.gt_max)) invalid(lines, "gt_max", "gt_max must be finite and > 0");
  if (s.n_points < 2) invalid(lines, "n_points", "n_points must be >= 2");
  if (!(s.tail_tol > 0.0 && s.tail_tol < 1.0)) invalid(lines, "tail_tol", "tail_tol must lie in (0, 1)");
  if (!(s.oracle_tol > 0.0 && s.oracle_tol < 1.0)) invalid(lines, "oracle_tol", "oracle_tol must lie in (0, 1)");

  if (!uses_q(s.kind) && s.q != 1.0) invalid(lines, "q", std::string("q is not a parameter of ") + kind_keyword(s.kind));
  if (s.kind != DeformationKind::Kerr && s.k != 0.0) invalid(lines, "k", std::string("k is not a parameter of ") + kind_keyword(s.kind));
  if (s.kind != DeformationKind::GeneralQ) {
    for (const auto& [key, value, neutral] : {std::tuple{"p", s.p, 1.0}, std::tuple{"lambda", s.lambda, 0.0},
                                              std::tuple{"mu", s.mu, 0.0}}) {
      if (value != neutral) invalid(lines, key, std::string(key) + " is only used by general_q");
    }
  }
}

double parse_real(std::string_view text, std::size_t line, std::size_t column) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError(line, column, "expected a finite number, got '" + std::string(text) + "'");
  }
  return value;
}

long long parse_integer(std::string_view text, std::size_t line, std::size_t column) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, column, "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

const char* kind_keyword(DeformationKind kind) noexcept {
  switch (kind) {
    case DeformationKind::Standard: return "standard";
    case DeformationKind::ArikCoon: return "arik_coon";
    case DeformationKind::PensonSolomon: return "penson_solomon";
    case DeformationKind::Quesne: return "quesne";
    case DeformationKind::Kerr: return "kerr";
    case DeformationKind::GeneralQ: return "general_q";
  }
  return "?";
}

DeformationSpec Scenario::spec() const {
  switch (kind) {
    case DeformationKind::Standard: return DeformationSpec::standard();
    case DeformationKind::ArikCoon: return DeformationSpec::arik_coon(q);
    case DeformationKind::PensonSolomon: return DeformationSpec::penson_solomon(q);
    case DeformationKind::Quesne: return DeformationSpec::quesne(q);
    case DeformationKind::Kerr: return DeformationSpec::kerr(k);
    case DeformationKind::GeneralQ: return DeformationSpec::general_q(q, p, lambda, mu);
  }
  throw InvalidSpec("unknown deformation kind");
}

ModelParams Scenario::params() const {
  if (omega0) return ModelParams(omega, *omega0, g, m, spec());
  return ModelParams::from_detuning(omega, delta_over_omega.value_or(0.0) * omega, g, m, spec());
}

AtomInit Scenario::atom() const { return AtomInit::from_alpha_sq(alpha_sq, phi); }

FieldAmplitude Scenario::amplitude() const { return FieldAmplitude::from_z_sq(z_sq, theta); }

std::vector<double> Scenario::gt_grid() const {
  std::vector<double> gt(n_points);
  const double last = static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) gt[i] = gt_max * (static_cast<double>(i) / last);
  return gt;
}

std::vector<double> Scenario::time_grid() const {
  std::vector<double> t = gt_grid();
  for (double& v : t) v /= g;
  return t;
}

void validate_scenario(const Scenario& s) { check(s, nullptr); }

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  KeyLines lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t first = 0;
    while (first < line.size() && is_space(line[first])) ++first;
    if (first == line.size()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, first + 1, "expected 'key = value'");
    std::size_t key_end = eq;
    while (key_end > first && is_space(line[key_end - 1])) --key_end;
    const std::string_view key = line.substr(first, key_end - first);
    if (key.empty()) throw ParseError(line_no, first + 1, "missing key before '='");

    std::size_t value_begin = eq + 1;
    while (value_begin < line.size() && is_space(line[value_begin])) ++value_begin;
    std::size_t value_end = line.size();
    while (value_end > value_begin && is_space(line[value_end - 1])) --value_end;
    const std::string_view value = line.substr(value_begin, value_end - value_begin);
    const std::size_t value_col = value_begin + 1;

    if (!known_key(key)) throw ParseError(line_no, first + 1, "unknown key '" + std::string(key) + "'");
    if (lines.contains(key)) {
      throw ParseError(line_no, first + 1,
                       "duplicate key '" + std::string(key) + "' (first on line " +
                           std::to_string(lines.find(key)->second) + ")");
    }
    if (value.empty()) throw ParseError(line_no, value_col, "missing value for '" + std::string(key) + "'");
    lines.emplace(std::string(key), line_no);

    const auto real = [&] { return parse_real(value, line_no, value_col); };
    if (key == "kind") {
      bool found = false;
      for (auto kind : kKinds) {
        if (value == kind_keyword(kind)) {
          s.kind = kind;
          found = true;
        }
      }
      if (!found) throw ParseError(line_no, value_col, "unknown deformation kind '" + std::string(value) + "'");
    } else if (key == "q") {
      s.q = real();
    } else if (key == "k") {
      s.k = real();
    } else if (key == "p") {
      s.p = real();
    } else if (key == "lambda") {
      s.lambda = real();
    } else if (key == "mu") {
      s.mu = real();
    } else if (key == "omega") {
      s.omega = real();
    } else if (key == "omega0") {
      s.omega0 = real();
    } else if (key == "delta_over_omega") {
      s.delta_over_omega = real();
    } else if (key == "g") {
      s.g = real();
    } else if (key == "m") {
      const long long m = parse_integer(value, line_no, value_col);
      if (m < 1 || m > 64) throw ParseError(line_no, value_col, "m must be an integer in [1, 64]");
      s.m = static_cast<int>(m);
    } else if (key == "alpha_sq") {
      s.alpha_sq = real();
    } else if (key == "phi") {
      s.phi = real();
    } else if (key == "z_sq") {
      s.z_sq = real();
    } else if (key == "theta") {
      s.theta = real();
    } else if (key == "gt_max") {
      s.gt_max = real();
    } else if (key == "n_points") {
      const long long n = parse_integer(value, line_no, value_col);
      if (n < 0) throw ParseError(line_no, value_col, "n_points must be nonnegative");
      s.n_points = static_cast<std::size_t>(n);
    } else if (key == "tail_tol") {
      s.tail_tol = real();
    } else if (key == "oracle_tol") {
      s.oracle_tol = real();
    }
  }

  for (const char* required : {"kind", "g", "m", "z_sq"}) {
    if (!lines.contains(std::string_view(required))) throw ValidationError(std::string("missing required key '") + required + "'");
  }
  if (uses_q(s.kind) && !lines.contains(std::string_view("q"))) {
    throw ValidationError(std::string(kind_keyword(s.kind)) + " requires q");
  }
  if (s.kind == DeformationKind::Kerr && !lines.contains(std::string_view("k"))) throw ValidationError("kerr requires k");
  if (s.kind == DeformationKind::GeneralQ && !lines.contains(std::string_view("p"))) throw ValidationError("general_q requires p");
  check(s, &lines);
  return s;
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw DomainError("number formatting failed");
  return std::string(buf.data(), ptr);
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "kind = " << kind_keyword(s.kind) << '\n';
  if (uses_q(s.kind)) out << "q = " << format_double(s.q) << '\n';
  if (s.kind == DeformationKind::Kerr) out << "k = " << format_double(s.k) << '\n';
  if (s.kind == DeformationKind::GeneralQ) {
    out << "p = " << format_double(s.p) << '\n'
        << "lambda = " << format_double(s.lambda) << '\n'
        << "mu = " << format_double(s.mu) << '\n';
  }
  out << "omega = " << format_double(s.omega) << '\n';
  if (s.omega0) out << "omega0 = " << format_double(*s.omega0) << '\n';
  if (s.delta_over_omega) out << "delta_over_omega = " << format_double(*s.delta_over_omega) << '\n';
  out << "g = " << format_double(s.g) << '\n'
      << "m = " << s.m << '\n'
      << "alpha_sq = " << format_double(s.alpha_sq) << '\n'
      << "phi = " << format_double(s.phi) << '\n'
      << "z_sq = " << format_double(s.z_sq) << '\n'
      << "theta = " << format_double(s.theta) << '\n'
      << "gt_max = " << format_double(s.gt_max) << '\n'
      << "n_points = " << s.n_points << '\n'
      << "tail_tol = " << format_double(s.tail_tol) << '\n'
      << "oracle_tol = " << format_double(s.oracle_tol) << '\n';
  return out.str();
}

}  // namespace qjcm
