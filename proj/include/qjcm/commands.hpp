#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qjcm/dynamics.hpp"
#include "qjcm/field_states.hpp"
#include "qjcm/revival.hpp"
#include "qjcm/scenario.hpp"

namespace qjcm {

enum class Subcommand { Dynamics, Spectrum, Analyze, Validate, Table1, Distribution };

std::optional<Subcommand> parse_subcommand(std::string_view name);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Oracle deviations at or above this fail `validate`.
inline constexpr double kValidateThreshold = 1e-6;

/// Runs one subcommand and writes its output to `out`. Returns the exit status.
int run_command(Subcommand command, const Scenario& scenario, std::ostream& out, unsigned threads = 1);

/// `gt` holds the scaled time of each sample.
void write_dynamics_csv(std::ostream& out, std::span<const double> gt,
                        std::span<const ObservableSample> samples);

/// Dressed energies for n in {1, 2} over Delta/omega in [-6, 6], step 0.01.
void write_spectrum_csv(std::ostream& out, const ModelParams& params);

void write_analysis_report(std::ostream& out, const AnalysisReport& report);

void write_distribution_csv(std::ostream& out, const PhotonDistribution& dist);

struct Table1Row {
  std::string label;
  DeformationSpec spec;
  double t_r_ref;
  double t_c_ref;
};

/// The six reference rows (nondeformed, Arik-Coon 1.1, Penson-Solomon
/// 0.85/0.9/0.95, Quesne 0.9) at g = 0.1, omega = 1, |z|^2 = 9, Delta = 0.
std::vector<Table1Row> table1_rows();

}  // namespace qjcm
