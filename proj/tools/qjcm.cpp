// qjcm: command-line driver for the deformed multiphoton JCM library.
//
//   qjcm <dynamics|spectrum|analyze|validate|table1|distribution> --config FILE [--out FILE]
//
// Errors go to stderr as one line: `error kind=<Kind> [line=L column=C] message=<text>`.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "qjcm/commands.hpp"
#include "qjcm/errors.hpp"
#include "qjcm/scenario.hpp"

namespace {

unsigned thread_budget() {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QJCM_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) threads = std::min<unsigned>(threads, static_cast<unsigned>(cap));
  }
  return threads;
}

int fail(int code, const char* kind, const std::string& message) {
  std::cerr << "error kind=" << kind << " message=" << message << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deformed multiphoton Jaynes-Cummings dynamics"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  const char* names[] = {"dynamics", "spectrum", "analyze", "validate", "table1", "distribution"};
  const char* blurbs[] = {
      "CSV of gt,sigma3,sigma1,sigma2,F1,F2 over the scenario grid",
      "CSV of the dressed energies for n = 1, 2 against Delta/omega",
      "key=value report of revival/collapse times and critical detuning",
      "compare the closed form with the truncated-basis integrator",
      "revival and collapse times of the six reference rows",
      "CSV of the initial photon-number amplitudes",
  };
  for (std::size_t i = 0; i < std::size(names); ++i) {
    auto* sub = app.add_subcommand(names[i], blurbs[i]);
    sub->add_option("--config", config_path, "scenario file")->required();
    sub->add_option("--out", out_path, "output file (default stdout)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(qjcm::kExitUsage, "UsageError", e.what());
  }

  const auto command = qjcm::parse_subcommand(app.get_subcommands().front()->get_name());

  std::ifstream in(config_path);
  if (!in) return fail(qjcm::kExitUsage, "UsageError", "cannot read config '" + config_path + "'");
  std::ostringstream text;
  text << in.rdbuf();

  std::ostringstream out;
  int status = qjcm::kExitOk;
  try {
    const qjcm::Scenario scenario = qjcm::parse_scenario(text.str());
    status = qjcm::run_command(*command, scenario, out, thread_budget());
  } catch (const qjcm::ParseError& e) {
    std::cerr << "error kind=ParseError line=" << e.line() << " column=" << e.column() << " message=" << e.what()
              << '\n';
    return qjcm::kExitUsage;
  } catch (const qjcm::Error& e) {
    return fail(qjcm::kExitFailure, e.kind(), e.what());
  } catch (const std::exception& e) {
    return fail(qjcm::kExitFailure, "InternalError", e.what());
  }

  if (out_path.empty()) {
    std::cout << out.str();
    std::cout.flush();
  } else {
    std::ofstream file(out_path, std::ios::binary);
    file << out.str();
    if (!file) return fail(qjcm::kExitFailure, "IoError", "cannot write '" + out_path + "'");
  }
  return status;
}
