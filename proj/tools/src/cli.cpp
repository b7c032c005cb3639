#include "cli.hpp"

#include "io.hpp"

#include "frameforge/density.hpp"
#include "frameforge/errors.hpp"
#include "frameforge/expframe_line.hpp"
#include "frameforge/frame_select.hpp"
#include "frameforge/lca_finite.hpp"
#include "frameforge/random.hpp"
#include "frameforge/sparsifier.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace frameforge::cli {

namespace {

using io::Json;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Runs tasks[i] for all i on up to `workers` threads; rethrows the exception
// of the lowest failing index.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, count));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Json envelope(const std::string& command, const RunConfig& cfg) {
  return Json{{"command", command}, {"version", io::kVersion}, {"seed", cfg.seed}, {"trials", cfg.trials}};
}

void emit(Json report, const RunConfig& cfg, Clock::time_point start, std::ostream& out) {
  if (cfg.timing) report["timing"] = Json{{"wall_ms", elapsed_ms(start)}};
  const std::string text = report.dump(2) + "\n";
  if (cfg.out.empty()) {
    out << text;
  } else {
    io::write_text(cfg.out, text);
  }
}

void require_epsilon(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("--epsilon must be a positive number");
}

// Coefficients of the seeded test function on the grid cells, unit l2 norm.
std::vector<Complex> demo_coefficients(std::size_t n, std::uint64_t seed) {
  return random_unit_vector(n, derive_seed(seed, 0x70772d64656d6fULL));
}

struct LineInstance {
  io::LineSpectrum spectrum;
  std::string source;
};

struct LineResult {
  GridSpectrum grid;
  Synthesis synthesis;
  double wall_ms = 0.0;
};

LineResult synthesize_line(const io::LineSpectrum& spectrum, double epsilon, double slack, const RunConfig& cfg) {
  const auto start = Clock::now();
  LineResult r;
  if (const auto* g = std::get_if<GridSpectrum>(&spectrum)) {
    r.grid = *g;
    r.synthesis = synthesize(*g, epsilon, cfg.quantizer(), cfg.tolerances);
  } else {
    auto s = synthesize_spectrum(std::get<IntervalSpectrum>(spectrum), epsilon, slack, cfg.quantizer(), cfg.tolerances);
    r.grid = std::move(s.grid);
    r.synthesis = std::move(s.synthesis);
  }
  r.wall_ms = elapsed_ms(start);
  return r;
}

Json pw_demo_json(const LineResult& r, const io::LineSpectrum& spectrum, std::uint64_t seed, std::uint64_t periods,
                  double radius) {
  // The test function lives on the normalized grid, so the bounds are taken
  // in grid units.
  double scale = 1.0;
  if (const auto* iv = std::get_if<IntervalSpectrum>(&spectrum)) scale = to_double(iv->length);
  const double a = r.synthesis.report.lower_bound / scale;
  const double b = r.synthesis.report.upper_bound / scale;

  SamplingSet grid_sampling = r.synthesis.sampling;
  grid_sampling.spacing = Rational{1};
  const auto c = demo_coefficients(r.grid.n(), seed);
  std::vector<Complex> conj_c(c.size());
  std::transform(c.begin(), c.end(), conj_c.begin(), [](Complex z) { return std::conj(z); });

  const double norm2 = pw_norm_squared(r.grid, c);
  const double truncated = frame_sum_truncated(r.grid, grid_sampling, c, periods) / norm2;
  const auto [converged, l_conv] = frame_sum_converged(r.grid, grid_sampling, c);
  FrameReport grid_report = r.synthesis.report;
  grid_report.lower_bound = a;
  grid_report.upper_bound = b;
  const SampleCheck sampled = pw_sample_check(r.grid, grid_sampling, c, radius, grid_report);
  const double direct_window = frame_sum_truncated(
      r.grid, grid_sampling, conj_c, static_cast<std::uint64_t>(std::floor(radius / static_cast<double>(r.grid.m))));
  const double ratio_converged = converged / norm2;
  return Json{{"L", periods},
              {"radius", radius},
              {"norm_squared", norm2},
              {"A_grid", a},
              {"B_grid", b},
              {"ratio_truncated", truncated},
              {"ratio_converged", ratio_converged},
              {"L_converged", l_conv},
              {"ratio_sampled", sampled.ratio},
              {"sampled_vs_closed_form", sampled.sum - direct_window},
              {"within_bounds", ratio_converged >= a * (1 - 1e-6) && ratio_converged <= b * (1 + 1e-6)}};
}

Json line_report(const LineInstance& inst, const LineResult& r, double epsilon, double slack, const RunConfig& cfg,
                 const std::string& command) {
  Json rep = envelope(command, cfg);
  Json input{{"spectrum", io::line_spectrum_json(inst.spectrum)}, {"epsilon", epsilon}};
  if (std::holds_alternative<IntervalSpectrum>(inst.spectrum)) input["slack"] = slack;
  rep["input"] = std::move(input);
  rep["grid"] = Json{{"m", r.grid.m}, {"n", r.grid.n()}, {"cells", r.grid.cells}};
  rep["sampling"] = io::sampling_json(r.synthesis.sampling);
  rep["report"] = io::frame_report_json(r.synthesis.report);
  return rep;
}

std::vector<LineInstance> load_line_spectra(const std::vector<std::string>& files) {
  std::vector<LineInstance> out;
  for (const auto& f : files) {
    try {
      out.push_back({io::parse_line_spectrum(io::read_json_file(f)), f});
    } catch (const ValidationError& e) {
      throw ValidationError("spectrum file " + f + ": " + e.what());
    }
  }
  return out;
}

void run_sweep(const std::vector<LineInstance>& instances, const std::vector<double>& epsilons, double slack,
               const RunConfig& cfg) {
  if (cfg.csv.empty()) throw ValidationError("--sweep-epsilon requires --csv");
  if (instances.empty()) throw ValidationError("--sweep-epsilon requires at least one --spectrum");
  for (double e : epsilons) require_epsilon(e);
  const std::size_t count = epsilons.size() * instances.size();
  std::vector<LineResult> results(count);
  parallel_for(count, thread_limit(), [&](std::size_t i) {
    results[i] = synthesize_line(instances[i % instances.size()].spectrum, epsilons[i / instances.size()], slack, cfg);
  });
  std::ostringstream csv;
  csv << "epsilon,m,n,cardJ,density,A_exact,B_exact,A_norm,B_norm,wall_ms\n";
  for (std::size_t i = 0; i < count; ++i) {
    const auto& rep = results[i].synthesis.report;
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f", cfg.timing ? results[i].wall_ms : 0.0);
    csv << io::format_double(epsilons[i / instances.size()]) << ',' << results[i].grid.m << ','
        << results[i].grid.n() << ',' << rep.cardinality << ',' << io::format_double(to_double(rep.density)) << ','
        << io::format_double(rep.lower_bound) << ',' << io::format_double(rep.upper_bound) << ','
        << io::format_double(rep.lower_normalized) << ',' << io::format_double(rep.upper_normalized) << ',' << wall
        << '\n';
  }
  io::write_text(cfg.csv, csv.str());
}

struct SynthOptions {
  std::vector<std::string> spectra;
  double slack = 0.25;
  bool demo = false;
  std::uint64_t periods = 64;
  double radius = -1.0;
  std::vector<double> sweep;
};

void cmd_synth(const SynthOptions& opt, const RunConfig& cfg, std::ostream& out, const std::string& command) {
  const auto start = Clock::now();
  const auto instances = load_line_spectra(opt.spectra);
  if (!opt.sweep.empty()) {
    run_sweep(instances, opt.sweep, opt.slack, cfg);
    return;
  }
  if (instances.size() != 1) throw ValidationError("exactly one --spectrum is required without --sweep-epsilon");
  require_epsilon(cfg.epsilon);
  const LineResult r = synthesize_line(instances[0].spectrum, cfg.epsilon, opt.slack, cfg);
  Json rep = line_report(instances[0], r, cfg.epsilon, opt.slack, cfg, command);
  if (opt.demo) {
    const double radius = opt.radius >= 0.0 ? opt.radius : static_cast<double>(r.grid.m * static_cast<std::int64_t>(opt.periods));
    rep["pw_demo"] = pw_demo_json(r, instances[0].spectrum, cfg.seed, opt.periods, radius);
  }
  emit(std::move(rep), cfg, start, out);
}

void cmd_group_synth(const std::string& file, const RunConfig& cfg, std::ostream& out) {
  const auto start = Clock::now();
  require_epsilon(cfg.epsilon);
  GroupSpectrum spectrum;
  try {
    spectrum = io::parse_group_spectrum(io::read_json_file(file));
  } catch (const ValidationError& e) {
    throw ValidationError("spectrum file " + file + ": " + e.what());
  }
  const GroupSynthesis syn = group_synthesize(spectrum, cfg.epsilon, cfg.quantizer(), cfg.tolerances);
  const BoxSubgroup reference = BoxSubgroup::whole(spectrum.group());
  const Rational d_ref = density_reference(syn.sampling, reference);

  Json rep = envelope("group-synth", cfg);
  rep["input"] = Json{{"spectrum", io::group_spectrum_json(spectrum)}, {"epsilon", cfg.epsilon}};
  rep["group"] = Json{{"orders", spectrum.group().orders()},
                      {"order", spectrum.group().order()},
                      {"lattice_divisors", spectrum.lattice.divisors()},
                      {"sampling_lattice_divisors", syn.sampling.subgroup.divisors()},
                      {"M", spectrum.cells_total()},
                      {"k", spectrum.k()}};
  Json reps = Json::array();
  for (const auto& h : syn.sampling.reps) reps.push_back(io::element_json(h));
  rep["sampling"] = Json{{"q", syn.sampling.q()}, {"reps", std::move(reps)}};
  rep["report"] = io::group_report_json(syn.report);
  const Rational q_over_k(static_cast<std::int64_t>(syn.report.q), static_cast<std::int64_t>(syn.report.k));
  rep["density_reference"] = io::rational_json(d_ref);
  rep["density_identity"] = d_ref == q_over_k * syn.report.measure;
  if (cfg.oracle) {
    if (spectrum.group().order() > 4096) throw ValidationError("--oracle is limited to #G <= 4096");
    const auto t = syn.sampling.elements();
    const auto omega = spectrum.elements();
    const auto [lo, hi] = exact_frame_bounds(spectrum.group(), t, omega, cfg.tolerances);
    rep["oracle"] = Json{{"A_exact", lo},
                         {"B_exact", hi},
                         {"agrees", std::abs(lo - syn.report.lower_bound) <= 1e-10 &&
                                        std::abs(hi - syn.report.upper_bound) <= 1e-10}};
  }
  emit(std::move(rep), cfg, start, out);
}

ComplexMatrix load_matrix(const std::string& file) {
  try {
    return io::parse_matrix(io::read_json_file(file));
  } catch (const ValidationError& e) {
    throw ValidationError("matrix file " + file + ": " + e.what());
  }
}

void cmd_sparsify(const std::string& file, double d, std::optional<double> quantize, const RunConfig& cfg,
                  std::ostream& out) {
  const auto start = Clock::now();
  if (!(d > 1.0)) throw ValidationError("--d must be greater than 1");
  const FrameFamily frame(load_matrix(file));
  const WeightedFrame w = bss_sparsify(frame, d, cfg.tolerances);
  Json rep = envelope("sparsify", cfg);
  rep["input"] = Json{{"matrix", file}, {"m", frame.size()}, {"n", frame.dim()}, {"d", d}};
  Json weights = Json::array();
  for (auto i : w.support) weights.push_back(w.weights[i]);
  rep["support"] = w.support;
  rep["weights"] = std::move(weights);
  rep["lambda_min"] = w.lambda_min;
  rep["lambda_max"] = w.lambda_max;
  rep["lower_target"] = std::pow(1.0 - 1.0 / std::sqrt(d), 2);
  rep["upper_target"] = std::pow(1.0 + 1.0 / std::sqrt(d), 2);
  rep["steps"] = w.steps;
  rep["d_effective"] = w.d_effective;
  if (quantize) {
    require_epsilon(*quantize);
    const QuantizedFrame q = quantize_weights(w, *quantize, cfg.quantizer(), cfg.tolerances);
    Json mult = Json::array();
    const auto support = q.support();
    for (auto i : support) mult.push_back(q.multiplicities()[i]);
    rep["quantized"] = Json{{"epsilon", *quantize},
                            {"support", support},
                            {"multiplicities", std::move(mult)},
                            {"unit", q.unit()},
                            {"achieved_a", q.achieved_a()},
                            {"theoretical_scale", q.theoretical_scale()},
                            {"deviation", q.deviation()}};
  }
  emit(std::move(rep), cfg, start, out);
}

void cmd_select(const std::string& file, const RunConfig& cfg, std::ostream& out) {
  const auto start = Clock::now();
  require_epsilon(cfg.epsilon);
  const ComplexMatrix m = load_matrix(file);
  if (cfg.oracle && m.rows() > 16) throw ValidationError("--oracle is limited to m <= 16");
  const SubsetFrame s = extract_unweighted(FrameFamily(m), cfg.epsilon, cfg.quantizer(), cfg.tolerances);
  Json rep = envelope("select", cfg);
  rep["input"] = Json{{"matrix", file}, {"m", m.rows()}, {"n", m.cols()}, {"epsilon", cfg.epsilon}};
  rep["J"] = s.indices;
  rep["cardJ"] = s.indices.size();
  rep["budget"] = s.budget;
  rep["A_exact"] = s.lower_bound;
  rep["B_exact"] = s.upper_bound;
  rep["lower_shape"] = lower_shape(cfg.epsilon);
  rep["upper_shape"] = upper_shape(cfg.epsilon);
  rep["sparsified_support"] = s.sparsified_support;
  rep["achieved_a"] = s.achieved_a;
  rep["theoretical_scale"] = s.theoretical_scale;
  rep["quantization_deviation"] = s.quantization_deviation;
  if (cfg.oracle) {
    const BestSubset best = best_subset_exhaustive(m, s.budget, cfg.tolerances);
    rep["oracle"] = Json{{"rows", best.rows},
                         {"A_best", best.lower_bound},
                         {"B_best", best.upper_bound},
                         {"subsets_examined", best.subsets_examined},
                         {"A_ratio", best.lower_bound > 0.0 ? s.lower_bound / best.lower_bound : 0.0}};
  }
  emit(std::move(rep), cfg, start, out);
}

Json lift_case_json(const BoxSubgroup& k, const LiftCase& c, const LiftResult& r) {
  Json q = Json::array();
  for (const auto& x : r.quotient_points) q.push_back(io::element_json(x));
  Json g = Json::array();
  for (const auto& x : c.gammas) g.push_back(io::element_json(x));
  const double scale = std::max(1.0, r.quotient_upper);
  const bool equal = std::abs(r.lifted_lower - r.quotient_lower) <= 1e-10 * scale &&
                     std::abs(r.lifted_upper - r.quotient_upper) <= 1e-10 * scale;
  return Json{{"orders", k.parent().orders()},
              {"k_divisors", k.divisors()},
              {"q", std::move(q)},
              {"gammas", std::move(g)},
              {"quotient_bounds", Json::array({r.quotient_lower, r.quotient_upper})},
              {"lifted_bounds", Json::array({r.lifted_lower, r.lifted_upper})},
              {"equal", equal}};
}

void cmd_lift_check(const std::string& file, std::size_t random_cases, const RunConfig& cfg, std::ostream& out) {
  const auto start = Clock::now();
  if (file.empty() == (random_cases == 0)) throw ValidationError("give exactly one of --input and --random");
  std::vector<LiftCase> cases;
  std::vector<std::vector<GroupElement>> kappas;
  if (!file.empty()) {
    try {
      const Json j = io::read_json_file(file);
      if (!j.is_object()) throw ValidationError("expected a JSON object");
      for (const char* key : {"orders", "k_divisors", "q", "gammas"})
        if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
      if (!j["orders"].is_array() || !j["k_divisors"].is_array()) {
        throw ValidationError("fields 'orders' and 'k_divisors' must be arrays of integers");
      }
      FiniteAbelianGroup g(j["orders"].get<std::vector<std::int64_t>>());
      LiftCase c{BoxSubgroup(g, j["k_divisors"].get<std::vector<std::int64_t>>()), {}, {}};
      for (const char* key : {"q", "gammas", "kappas"}) {
        if (!j.contains(key)) continue;
        if (!j[key].is_array()) throw ValidationError(std::string("field '") + key + "' must be an array");
        std::vector<GroupElement> list;
        for (std::size_t i = 0; i < j[key].size(); ++i)
          list.push_back(io::parse_element(j[key][i], g.rank(), std::string(key) + "[" + std::to_string(i) + "]"));
        if (std::string(key) == "q") c.q_points = std::move(list);
        else if (std::string(key) == "gammas") c.gammas = std::move(list);
        else kappas.push_back(std::move(list));
      }
      cases.push_back(std::move(c));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("lift file " + file + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("lift file " + file + ": " + e.what());
    }
  } else {
    for (std::size_t i = 0; i < random_cases; ++i) cases.push_back(random_lift_case(derive_seed(cfg.seed, i)));
  }

  Json rep = envelope("lift-check", cfg);
  Json list = Json::array();
  bool all_equal = true;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const std::vector<GroupElement> none;
    const auto& kap = kappas.empty() ? none : kappas[i];
    const LiftResult r = lift_frame(cases[i].k, cases[i].q_points, cases[i].gammas, kap, cfg.tolerances);
    Json cj = lift_case_json(cases[i].k, cases[i], r);
    all_equal = all_equal && cj["equal"].get<bool>();
    list.push_back(std::move(cj));
  }
  rep["cases"] = std::move(list);
  rep["all_equal"] = all_equal;
  emit(std::move(rep), cfg, start, out);
}

void cmd_density(const std::string& file, const std::vector<double>& radii, const RunConfig& cfg, std::ostream& out) {
  if (radii.empty()) throw ValidationError("--r needs at least one window length");
  Json j;
  try {
    j = io::read_json_file(file);
  } catch (const ValidationError& e) {
    throw ValidationError("points file " + file + ": " + e.what());
  }
  std::optional<SamplingSet> sampling;
  std::optional<PointSet1D> points;
  Window window;
  try {
    if (j.is_object() && j.contains("sampling")) {
      sampling = io::parse_sampling(j["sampling"]);
    } else if (j.is_object() && j.contains("points")) {
      if (!j["points"].is_array()) throw ValidationError("field 'points' must be an array of numbers");
      std::vector<double> p;
      for (const auto& v : j["points"]) {
        if (!v.is_number()) throw ValidationError("field 'points' must be an array of numbers");
        p.push_back(v.get<double>());
      }
      const double sep = j.contains("separation") ? j["separation"].get<double>() : 0.0;
      points = PointSet1D(std::move(p), sep);
      if (j.contains("window")) {
        if (!j["window"].is_array() || j["window"].size() != 2) throw ValidationError("field 'window' must be [lo, hi]");
        window = {j["window"][0].get<double>(), j["window"][1].get<double>()};
      } else if (!points->empty()) {
        window = {points->points().front(), points->points().back()};
      }
    } else {
      throw ValidationError("expected field 'points' or a report with field 'sampling'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("points file " + file + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError("points file " + file + ": " + e.what());
  }

  std::ostringstream csv;
  csv << "r,D_minus,D_plus,exact,error_bound\n";
  for (double r : radii) {
    if (!(r > 0.0)) throw ValidationError("--r values must be positive");
    if (sampling) {
      const auto [lo, hi] = beurling_window_estimate(*sampling, r);
      const double exact = to_double(sampling->density());
      const double bound = static_cast<double>(sampling->offsets.size()) / r;
      csv << io::format_double(r) << ',' << io::format_double(lo) << ',' << io::format_double(hi) << ','
          << io::format_double(exact) << ',' << io::format_double(bound) << '\n';
    } else {
      const DensityEstimate est = beurling_bounds(*points, window, r);
      csv << io::format_double(r) << ',' << io::format_double(est.lower) << ',' << io::format_double(est.upper)
          << ",,\n";
    }
  }
  if (cfg.csv.empty()) {
    out << csv.str();
  } else {
    io::write_text(cfg.csv, csv.str());
  }
}

}  // namespace

std::size_t thread_limit() {
  std::size_t hw = std::max<unsigned>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FRAMEFORGE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw ValidationError("FRAMEFORGE_THREADS must be a positive integer");
    return static_cast<std::size_t>(v);
  }
  return hw;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exponential frames via spectral sparsification and DFT submatrix selection", "frameforge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", io::kVersion);

  RunConfig cfg;
  bool no_timing = false;
  auto common = [&](CLI::App* sub, bool with_epsilon) {
    if (with_epsilon) sub->add_option("--epsilon", cfg.epsilon, "Target oversampling epsilon > 0");
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--trials", cfg.trials, "Quantizer trials per scale")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--out", cfg.out, "Report file (default: standard output)");
    sub->add_flag("--no-timing", no_timing, "Omit wall-clock timing from reports");
  };

  SynthOptions synth_opt;
  auto* synth = app.add_subcommand("synth", "Construct an exponential frame for a spectrum on the line");
  common(synth, true);
  synth->add_option("--spectrum", synth_opt.spectra, "Spectrum JSON file (repeatable for sweeps)")->required();
  synth->add_option("--slack", synth_opt.slack, "Grid covering slack for interval spectra")->capture_default_str();
  synth->add_flag("--demo-pw", synth_opt.demo, "Evaluate frame sums for a seeded Paley-Wiener test function");
  synth->add_option("--L", synth_opt.periods, "Periods in the truncated frame sum")->capture_default_str();
  synth->add_option("--radius", synth_opt.radius, "Sampling radius for the direct check (default m L)");
  synth->add_option("--sweep-epsilon", synth_opt.sweep, "Comma-separated epsilons")->delimiter(',');
  synth->add_option("--csv", cfg.csv, "Sweep CSV output");

  SynthOptions pw_opt;
  pw_opt.demo = true;
  auto* pw = app.add_subcommand("pw-demo", "Synthesize and check the sampling inequality on a test function");
  common(pw, true);
  pw->add_option("--spectrum", pw_opt.spectra, "Spectrum JSON file")->required();
  pw->add_option("--slack", pw_opt.slack, "Grid covering slack for interval spectra")->capture_default_str();
  pw->add_option("--L", pw_opt.periods, "Periods in the truncated frame sum")->capture_default_str();
  pw->add_option("--radius", pw_opt.radius, "Sampling radius for the direct check (default m L)");

  std::string group_file;
  auto* gsynth = app.add_subcommand("group-synth", "Construct a character frame on a finite abelian group");
  common(gsynth, true);
  gsynth->add_option("--spectrum", group_file, "Group spectrum JSON file")->required();
  gsynth->add_flag("--oracle", cfg.oracle, "Cross-check bounds against the full frame operator");

  std::string matrix_file;
  double d = 0.0;
  std::optional<double> quantize;
  auto* sparsify = app.add_subcommand("sparsify", "Barrier sparsification of a Parseval frame");
  common(sparsify, false);
  sparsify->add_option("--matrix", matrix_file, "Matrix JSON file; rows are the frame vectors")->required();
  sparsify->add_option("--d", d, "Oversampling factor d > 1")->required();
  sparsify->add_option("--quantize", quantize, "Quantize the weights to this operator-norm accuracy");

  auto* select = app.add_subcommand("select", "Unweighted subset of an equal-norm Parseval frame");
  common(select, true);
  select->add_option("--matrix", matrix_file, "Matrix JSON file; rows are the frame vectors")->required();
  select->add_flag("--oracle", cfg.oracle, "Compare with exhaustive search (m <= 16)");

  std::string lift_file;
  std::size_t random_cases = 0;
  auto* lift = app.add_subcommand("lift-check", "Compare quotient and lifted frame bounds");
  common(lift, false);
  lift->add_option("--input", lift_file, "Lift case JSON file");
  lift->add_option("--random", random_cases, "Number of seeded random cases");

  std::string points_file;
  std::vector<double> radii;
  auto* density = app.add_subcommand("density", "Sliding-window Beurling density estimates");
  density->add_option("--points", points_file, "Points JSON file, or a synth report (uses its sampling set)")->required();
  density->add_option("--r", radii, "Comma-separated window lengths")->delimiter(',')->required();
  density->add_option("--out", cfg.csv, "CSV output (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }
  cfg.timing = !no_timing;

  try {
    if (synth->parsed()) {
      cmd_synth(synth_opt, cfg, out, "synth");
    } else if (pw->parsed()) {
      if (pw_opt.spectra.size() != 1) throw ValidationError("pw-demo takes exactly one --spectrum");
      cmd_synth(pw_opt, cfg, out, "pw-demo");
    } else if (gsynth->parsed()) {
      cmd_group_synth(group_file, cfg, out);
    } else if (sparsify->parsed()) {
      cmd_sparsify(matrix_file, d, quantize, cfg, out);
    } else if (select->parsed()) {
      cmd_select(matrix_file, cfg, out);
    } else if (lift->parsed()) {
      cmd_lift_check(lift_file, random_cases, cfg, out);
    } else if (density->parsed()) {
      cmd_density(points_file, radii, cfg, out);
    }
  } catch (const QuantizationFailure& e) {
    err << "quantization failure: " << e.what() << " (best deviation " << e.best_deviation() << ")\n";
    return kQuantization;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const CoverFailure& e) {
    err << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kUnexpected;
  }
  return kOk;
}

}  // namespace frameforge::cli
