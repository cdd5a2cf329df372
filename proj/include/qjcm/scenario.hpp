#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qjcm/deformation.hpp"
#include "qjcm/field_states.hpp"
#include "qjcm/oracle.hpp"
#include "qjcm/spectrum.hpp"

namespace qjcm {

/// One run configuration, as read from a flat `key = value` file.
/// Exactly one of omega0 / delta_over_omega is set.
struct Scenario {
  DeformationKind kind = DeformationKind::Standard;
  double q = 1.0;
  double k = 0.0;
  double p = 1.0;
  double lambda = 0.0;
  double mu = 0.0;

  double omega = 1.0;
  std::optional<double> omega0;
  std::optional<double> delta_over_omega;
  double g = 0.1;
  int m = 2;

  double alpha_sq = 1.0;
  double phi = 0.0;
  double z_sq = 0.0;
  double theta = 0.0;

  double gt_max = 25.0;
  std::size_t n_points = 2000;
  double tail_tol = kDefaultTailTol;
  double oracle_tol = kDefaultOracleTol;

  DeformationSpec spec() const;
  ModelParams params() const;
  AtomInit atom() const;
  FieldAmplitude amplitude() const;
  /// Evenly spaced scaled times gt in [0, gt_max], n_points of them.
  std::vector<double> gt_grid() const;
  /// The same grid as physical times t = gt / g.
  std::vector<double> time_grid() const;

  bool operator==(const Scenario&) const = default;
};

const char* kind_keyword(DeformationKind kind) noexcept;

/// Parses and validates a scenario document. Syntax problems raise
/// ParseError with 1-based line and column; violated model preconditions
/// raise ValidationError.
Scenario parse_scenario(std::string_view text);

/// Checks every precondition the modules impose; throws ValidationError.
void validate_scenario(const Scenario& s);

/// Canonical config text; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double value);

}  // namespace qjcm
