// Command-line front end: solve, scan, convergence and presets.
//
// Exit status is 0 on success. Failures print one line
//   aniscat: error: category=<tag>: <message>
// to stderr and exit with the category's code (config 2, invalid_argument 3,
// precondition 4, numerical 5, io 6). A scan with failed points exits 7.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aniscat/errors.hpp"
#include "aniscat/runner.hpp"

namespace {

using namespace aniscat;

constexpr int kScanPartialFailure = 7;

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::string out;
  int workers = 1;
  std::vector<std::string> overrides;
  bool production = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  auto* config = cmd->add_option("--config", opt.config_path,
                                 "Configuration file (INI)");
  auto* preset = cmd->add_option("--preset", opt.preset, "Bundled preset name");
  config->excludes(preset);
  cmd->add_option("--out", opt.out,
                  "Output CSV path (default: output.path, else stdout)");
  cmd->add_option("--workers", opt.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--set", opt.overrides,
                  "Override a config entry, section.key=value (repeatable)");
  cmd->add_flag("--production", opt.production,
                "Allow presets marked as production scale");
}

RunConfig resolve(const CommonOptions& opt) {
  ConfigOverrides overrides;
  for (const std::string& o : opt.overrides) overrides.push_back(parse_override(o));
  RunConfig config;
  if (!opt.preset.empty()) {
    config = load_preset(opt.preset, overrides);
  } else if (!opt.config_path.empty()) {
    config = load_config(opt.config_path, overrides);
  } else {
    throw Error(ErrorCategory::kConfig, "give --config PATH or --preset NAME");
  }
  if (config.production && !opt.production) {
    throw Error(ErrorCategory::kConfig,
                "preset.production: '" + config.name +
                    "' runs at production scale; pass --production to run it");
  }
  return config;
}

std::string output_path(const CommonOptions& opt, const RunConfig& config) {
  return opt.out.empty() ? config.output.path : opt.out;
}

void emit(const CsvTable& table, const std::string& path) {
  if (path.empty()) {
    std::cout << render_csv(table);
  } else {
    write_csv(path, table);
  }
}

// "<stem>_channels.csv" next to the main output.
std::string channel_path(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  const bool has_ext = dot != std::string::npos &&
                       (slash == std::string::npos || dot > slash);
  return (has_ext ? path.substr(0, dot) : path) + "_channels.csv";
}

std::string format(double v) { return format_number(v, 10); }

int run_solve(const CommonOptions& opt) {
  const RunConfig config = resolve(opt);
  const SingleResult result = run_single(config, opt.workers);
  const std::string path = output_path(opt, config);
  emit(single_table(config, result), path);
  if (!path.empty()) write_csv(channel_path(path), channel_table(config, result));
  std::cerr << "f(q,0)  = " << format(result.forward.real()) << " "
            << format(result.forward.imag()) << "i\n"
            << "f(q,pi) = " << format(result.backward.real()) << " "
            << format(result.backward.imag()) << "i\n"
            << "sigma   = " << format(result.cross_sections.sigma) << "\n";
  if (result.sigma_over_sc) {
    std::cerr << "sigma/sigma_SC = " << format(*result.sigma_over_sc) << "\n";
  }
  if (result.scattering_length) {
    std::cerr << "a_2D    = " << format(*result.scattering_length) << "\n";
  }
  for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

int run_scan_command(const CommonOptions& opt) {
  const RunConfig config = resolve(opt);
  if (!config.scan) throw Error(ErrorCategory::kConfig, "scan: section missing");
  const ScanResult result = run_scan(config, opt.workers);
  emit(scan_table(config, result), output_path(opt, config));
  for (const ScanRow& row : result.rows) {
    if (!row.result) {
      std::cerr << "aniscat: point " << config.scan->label << "="
                << format(row.given) << " failed: category="
                << row.error_category << ": " << row.error << "\n";
    }
  }
  return result.failures == 0 ? 0 : kScanPartialFailure;
}

int run_convergence_command(const CommonOptions& opt) {
  const RunConfig config = resolve(opt);
  const ConvergenceResult result = run_convergence(config, opt.workers);
  emit(convergence_table(config, result), output_path(opt, config));
  if (result.order) std::cerr << "empirical order = " << format(*result.order) << "\n";
  return 0;
}

int run_presets() {
  for (const PresetInfo& p : list_presets()) {
    std::cout << p.name << (p.production ? "  [production]" : "") << "\n    "
              << p.description << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-dimensional anisotropic quantum scattering solver"};
  app.require_subcommand(1);
  CommonOptions solve_opt;
  CommonOptions scan_opt;
  CommonOptions conv_opt;
  auto* solve = app.add_subcommand("solve", "Amplitudes and cross sections for one configuration");
  add_common(solve, solve_opt);
  auto* scan = app.add_subcommand("scan", "Run the [scan] grid of a configuration");
  add_common(scan, scan_opt);
  auto* conv = app.add_subcommand("convergence", "Run the [convergence] study of a configuration");
  add_common(conv, conv_opt);
  auto* presets = app.add_subcommand("presets", "List bundled presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "aniscat: error: category=" << category_tag(ErrorCategory::kConfig)
              << ": " << e.what() << "\n";
    return exit_code(ErrorCategory::kConfig);
  }

  try {
    if (*solve) return run_solve(solve_opt);
    if (*scan) return run_scan_command(scan_opt);
    if (*conv) return run_convergence_command(conv_opt);
    if (*presets) return run_presets();
  } catch (const Error& e) {
    std::cerr << "aniscat: error: category=" << category_tag(e.category()) << ": "
              << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "aniscat: error: category="
              << category_tag(ErrorCategory::kNumerical) << ": " << e.what() << "\n";
    return exit_code(ErrorCategory::kNumerical);
  }
  return 0;
}
