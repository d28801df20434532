#include "aniscat/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "aniscat/errors.hpp"
#include "aniscat/scattering.hpp"

namespace aniscat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// d1 d2 in internal units, the dipolar length D for hbar = mu = 1.
std::optional<double> dipolar_length_of(const PotentialSpec& spec) {
  return std::visit(
      [](const auto& model) -> std::optional<double> {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, EllipticBarrier>) {
          return std::nullopt;
        } else {
          return model.strength;
        }
      },
      spec.model);
}

CrossSectionSet single_direction_cross_sections(const AmplitudeSet& set) {
  CrossSectionSet cs;
  cs.angles = set.angles;
  cs.directions = {set.phi_q};
  const std::vector<double> d = differential_cs(set);
  cs.differential.resize(static_cast<int>(d.size()), 1);
  for (size_t i = 0; i < d.size(); ++i) cs.differential(i, 0) = d[i];
  cs.sigma = integrated_cs(set);
  const SymmetrizedSet sym = symmetrize(set);
  cs.sigma_g = integrated_cs(sym.gerade);
  cs.sigma_u = integrated_cs(sym.ungerade);
  return cs;
}

std::string column_value(double v, int precision) {
  return format_number(v, precision);
}

std::vector<std::string> header_comments(const RunConfig& config,
                                         const std::string& kind) {
  std::vector<std::string> lines;
  lines.push_back("aniscat " + kind);
  if (!config.name.empty()) lines.push_back("config_name: " + config.name);
  if (!config.description.empty()) {
    lines.push_back("description: " + config.description);
  }
  lines.push_back("config_hash: " + config_hash(config));
  std::string listing = canonical_listing(config);
  size_t start = 0;
  while (start < listing.size()) {
    const size_t end = listing.find('\n', start);
    lines.push_back("config: " + listing.substr(start, end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return lines;
}

void append_warnings(std::vector<std::string>& lines,
                     const std::vector<std::string>& warnings) {
  if (warnings.empty()) {
    lines.push_back("warnings: none");
    return;
  }
  for (const std::string& w : warnings) lines.push_back("warning: " + w);
}

void add_unique(std::vector<std::string>& into, const std::string& w) {
  if (std::find(into.begin(), into.end(), w) == into.end()) into.push_back(w);
}

}  // namespace

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  const int threads = std::max(1, std::min(workers, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

SingleResult run_single(const RunConfig& config, int workers) {
  const NumericsConfig& n = config.numerics;
  ProblemSetup setup = make_setup(config);
  const int B = setup.ang.size();
  const int angle_count = n.angle_count > 0 ? n.angle_count : 2 * B;

  SingleResult result;
  if (n.phi_q_count == 0) {
    result.sets.push_back(solve_amplitudes(setup));
  } else {
    const std::vector<double> directions = uniform_angles(n.phi_q_count);
    setup.phi_q = 0.0;
    if (n.rotation == RotationMode::kIncident) {
      result.sets = solve_directions(setup, directions, RotationMode::kIncident);
    } else {
      result.sets.resize(directions.size());
      std::vector<std::exception_ptr> errors(directions.size());
      parallel_for(static_cast<int>(directions.size()), workers, [&](int i) {
        try {
          ProblemSetup s = setup;
          s.phi_q = directions[i];
          result.sets[i] = solve_amplitudes(s);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
      for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
  }
  for (AmplitudeSet& set : result.sets) set.angles = uniform_angles(angle_count);

  const std::optional<double> D = dipolar_length_of(config.potential);
  if (n.phi_q_count == 0) {
    result.cross_sections = single_direction_cross_sections(result.sets[0]);
    if (D) result.cross_sections.sigma_sc = eikonal_sigma(config.q, *D);
  } else {
    result.cross_sections = cross_sections(result.sets, D);
  }
  const AmplitudeSet& first = result.sets.front();
  result.forward = amplitude_at(first, 0.0);
  result.backward = amplitude_at(first, kPi);
  if (is_barrier(config.potential) && std::abs(result.forward) > 0.0) {
    result.scattering_length = scattering_length(result.forward, config.q);
  }
  if (result.cross_sections.sigma_sc) {
    result.sigma_over_sc =
        result.cross_sections.sigma / *result.cross_sections.sigma_sc;
  }
  for (const AmplitudeSet& set : result.sets) {
    result.stability = std::max(result.stability, set.stability);
    result.optical_defect =
        std::max(result.optical_defect, optical_theorem_defect(set));
    for (const std::string& w : set.warnings) add_unique(result.warnings, w);
  }
  return result;
}

ScanResult run_scan(const RunConfig& config, int workers) {
  if (!config.scan) {
    throw Error(ErrorCategory::kConfig, "scan: section missing");
  }
  const ScanConfig& scan = *config.scan;
  ScanResult out;
  out.rows.resize(scan.values.size());
  parallel_for(static_cast<int>(scan.values.size()), workers, [&](int i) {
    ScanRow& row = out.rows[i];
    row.given = scan.given[i];
    row.value = scan.values[i];
    try {
      row.result = run_single(with_scan_value(config, scan.variable, row.value));
    } catch (const Error& e) {
      row.error_category = category_tag(e.category());
      row.error = e.what();
    } catch (const std::exception& e) {
      row.error_category = category_tag(ErrorCategory::kNumerical);
      row.error = e.what();
    }
  });
  for (const ScanRow& row : out.rows) {
    if (!row.result) ++out.failures;
  }
  return out;
}

ConvergenceResult run_convergence(const RunConfig& config, int workers) {
  if (!config.convergence) {
    throw Error(ErrorCategory::kConfig, "convergence: section missing");
  }
  const ConvergenceConfig& conv = *config.convergence;
  const double h = (config.numerics.rhoN -
                    config.numerics.rho0.value_or(hard_wall_radius(config.potential))) /
                   config.numerics.N;
  std::vector<RunConfig> runs;
  for (double v : conv.values) {
    RunConfig c = config;
    c.numerics.phi_q_count = 0;
    switch (conv.axis) {
      case ConvergenceAxis::kM:
        c.numerics.M = static_cast<int>(v);
        break;
      case ConvergenceAxis::kN:
        c.numerics.N = static_cast<int>(v);
        break;
      case ConvergenceAxis::kRhoN: {
        const double rho0 = c.numerics.rho0.value_or(hard_wall_radius(c.potential));
        c.numerics.rhoN = v;
        c.numerics.N = static_cast<int>(std::lround((v - rho0) / h));
        break;
      }
    }
    runs.push_back(std::move(c));
  }
  std::vector<AmplitudeSet> sets(runs.size());
  std::vector<std::exception_ptr> errors(runs.size());
  parallel_for(static_cast<int>(runs.size()), workers, [&](int i) {
    try {
      sets[i] = solve_amplitudes(make_setup(runs[i]));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ConvergenceResult out;
  out.axis = conv.axis;
  for (size_t i = 0; i < runs.size(); ++i) {
    ConvergenceRow row;
    row.axis_value = conv.values[i];
    row.forward = amplitude_at(sets[i], 0.0);
    row.backward = amplitude_at(sets[i], kPi);
    if (i > 0) {
      const ConvergenceRow& prev = out.rows.back();
      row.difference = std::max(
          {std::abs(row.forward.real() - prev.forward.real()),
           std::abs(row.forward.imag() - prev.forward.imag()),
           std::abs(row.backward.real() - prev.backward.real()),
           std::abs(row.backward.imag() - prev.backward.imag())});
      if (conv.axis == ConvergenceAxis::kN && prev.difference &&
          *prev.difference > 0.0 && *row.difference > 0.0) {
        const double ratio = conv.values[i] / conv.values[i - 1];
        row.order = std::log(*prev.difference / *row.difference) / std::log(ratio);
        out.order = row.order;
      }
    }
    for (const std::string& w : sets[i].warnings) add_unique(out.warnings, w);
    out.rows.push_back(row);
  }
  return out;
}

CsvTable single_table(const RunConfig& config, const SingleResult& result) {
  const int p = config.output.precision;
  CsvTable table;
  table.comments = header_comments(config, "solve");
  const CrossSectionSet& cs = result.cross_sections;
  table.comments.push_back("sigma: " + column_value(cs.sigma, p));
  table.comments.push_back("sigma_g: " + column_value(cs.sigma_g, p));
  table.comments.push_back("sigma_u: " + column_value(cs.sigma_u, p));
  if (cs.sigma_sc) {
    table.comments.push_back("sigma_sc: " + column_value(*cs.sigma_sc, p));
    table.comments.push_back("sigma_over_sc: " +
                             column_value(*result.sigma_over_sc, p));
  }
  if (result.scattering_length) {
    table.comments.push_back("a_2d: " + column_value(*result.scattering_length, p));
  }
  table.comments.push_back("optical_theorem_defect: " +
                           column_value(result.optical_defect, p));
  table.comments.push_back("matching_stability: " +
                           column_value(result.stability, p));
  append_warnings(table.comments, result.warnings);
  table.columns = {"phi_q", "phi", "re_f", "im_f", "dsigma"};
  for (size_t c = 0; c < result.sets.size(); ++c) {
    const AmplitudeSet& set = result.sets[c];
    for (size_t i = 0; i < set.angles.size(); ++i) {
      const cplx f = amplitude_at(set, set.angles[i]);
      table.rows.push_back({column_value(set.phi_q, p),
                            column_value(set.angles[i], p),
                            column_value(f.real(), p), column_value(f.imag(), p),
                            column_value(cs.differential(i, c), p)});
    }
  }
  return table;
}

CsvTable channel_table(const RunConfig& config, const SingleResult& result) {
  const int p = config.output.precision;
  CsvTable table;
  table.comments = header_comments(config, "channels");
  append_warnings(table.comments, result.warnings);
  table.columns = {"phi_q", "m", "re_fm", "im_fm"};
  for (const AmplitudeSet& set : result.sets) {
    for (int m = -set.M; m <= set.M; ++m) {
      const cplx f = set.coefficient(m);
      table.rows.push_back({column_value(set.phi_q, p), std::to_string(m),
                            column_value(f.real(), p),
                            column_value(f.imag(), p)});
    }
  }
  return table;
}

CsvTable scan_table(const RunConfig& config, const ScanResult& result) {
  const int p = config.output.precision;
  CsvTable table;
  table.comments = header_comments(config, "scan");
  std::vector<std::string> warnings;
  for (const ScanRow& row : result.rows) {
    if (row.result) {
      for (const std::string& w : row.result->warnings) {
        add_unique(warnings, config.scan->label + "=" +
                                 format_number(row.given, 6) + ": " + w);
      }
    }
  }
  table.comments.push_back("failed_points: " + std::to_string(result.failures));
  append_warnings(table.comments, warnings);
  table.columns = {config.scan->label, "status", "re_f_0", "im_f_0", "re_f_pi",
                   "im_f_pi", "sigma", "sigma_g", "sigma_u", "sigma_over_sc",
                   "a_2d", "optical_defect", "stability", "error"};
  for (const ScanRow& row : result.rows) {
    std::vector<std::string> cells{column_value(row.given, p)};
    if (row.result) {
      const SingleResult& r = *row.result;
      cells.insert(cells.end(),
                   {"ok", column_value(r.forward.real(), p),
                    column_value(r.forward.imag(), p),
                    column_value(r.backward.real(), p),
                    column_value(r.backward.imag(), p),
                    column_value(r.cross_sections.sigma, p),
                    column_value(r.cross_sections.sigma_g, p),
                    column_value(r.cross_sections.sigma_u, p),
                    column_value(r.sigma_over_sc.value_or(kNaN), p),
                    column_value(r.scattering_length.value_or(kNaN), p),
                    column_value(r.optical_defect, p),
                    column_value(r.stability, p), ""});
    } else {
      cells.push_back("error:" + row.error_category);
      for (int i = 0; i < 11; ++i) cells.push_back("nan");
      std::string message = row.error;
      std::replace(message.begin(), message.end(), ',', ';');
      cells.push_back(message);
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

CsvTable convergence_table(const RunConfig& config,
                           const ConvergenceResult& result) {
  const int p = config.output.precision;
  CsvTable table;
  table.comments = header_comments(config, "convergence");
  if (result.order) {
    table.comments.push_back("empirical_order: " + column_value(*result.order, p));
  }
  append_warnings(table.comments, result.warnings);
  table.columns = {convergence_axis_name(result.axis), "re_f_0", "im_f_0",
                   "re_f_pi", "im_f_pi", "difference", "order"};
  for (const ConvergenceRow& row : result.rows) {
    table.rows.push_back({column_value(row.axis_value, p),
                          column_value(row.forward.real(), p),
                          column_value(row.forward.imag(), p),
                          column_value(row.backward.real(), p),
                          column_value(row.backward.imag(), p),
                          column_value(row.difference.value_or(kNaN), p),
                          column_value(row.order.value_or(kNaN), p)});
  }
  return table;
}

}  // namespace aniscat
