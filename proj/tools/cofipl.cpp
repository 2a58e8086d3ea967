#include "cofipl/config.hpp"
#include "cofipl/montecarlo.hpp"
#include "cofipl/ops.hpp"
#include "cofipl/pipeline.hpp"
#include "cofipl/stack_io.hpp"
#include "cofipl/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef COFIPL_VERSION
#define COFIPL_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace cofipl;

namespace {

/// Collects `--<key> value` overrides for a list of config keys.
struct KeyFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void add(CLI::App& app, const std::vector<std::string>& keys) {
    for (const std::string& key : keys) {
      options[key] = app.add_option("--" + key, values[key], "config key " + key);
    }
  }

  config::KeyValues overrides() const {
    config::KeyValues kv;
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) kv[key] = values.at(key);
    }
    return kv;
  }
};

config::KeyValues merged(const std::string& config_path, const KeyFlags& flags) {
  config::KeyValues kv;
  if (!config_path.empty()) kv = config::load_key_values(config_path);
  for (const auto& [k, v] : flags.overrides()) kv[k] = v;
  return kv;
}

json echo(const std::vector<std::pair<std::string, std::string>>& kv) {
  json out = json::object();
  for (const auto& [k, v] : kv) out[k] = v;
  return out;
}

json manifest_header(const std::string& command) {
  json m;
  m["tool"] = "cofipl";
  m["version"] = COFIPL_VERSION;
  m["command"] = command;
  m["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
               "." + std::to_string(EIGEN_MINOR_VERSION);
  m["compiler"] = __VERSION__;
  return m;
}

void write_manifest(const fs::path& dir, const json& m) {
  std::ofstream out(dir / "manifest.json");
  if (!out) throw io::IoError("cannot write " + (dir / "manifest.json").string());
  out << m.dump(2) << '\n';
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string pair_stem(const pipeline::PhasePair& pr) {
  return std::to_string(pr.q + 1) + "-" + std::to_string(pr.l + 1);
}

void write_phase_map(const fs::path& dir, const std::string& stem, Index rows, Index cols,
                     std::vector<float> values) {
  io::write_pgm(dir / (stem + ".pgm"), rows, cols, io::render_phase(values));
  io::write_raster(dir / (stem + ".cofr"), RealRaster{1, rows, cols, std::move(values)});
}

void write_flags(const fs::path& dir, Index rows, Index cols,
                 const std::vector<std::uint8_t>& flags) {
  io::write_pgm(dir / "flags.pgm", rows, cols, flags);
}

RealRaster phases_raster(const PhaseImage& img) {
  RealRaster r{img.p, img.rows, img.cols, {}};
  r.values.assign(img.phases.begin(), img.phases.end());
  return r;
}

PhaseImage phases_from_raster(const RealRaster& r) {
  PhaseImage img(r.channels, r.rows, r.cols);
  for (std::size_t i = 0; i < r.values.size(); ++i) img.phases[i] = r.values[i];
  return img;
}

std::optional<PhaseImage> load_truth(const std::string& path, const ImageStack& stack) {
  if (path.empty()) return std::nullopt;
  PhaseImage truth = phases_from_raster(io::read_raster(path));
  if (truth.p != stack.p() || truth.rows != stack.rows() || truth.cols != stack.cols()) {
    throw InvalidArgument("truth raster shape does not match the stack");
  }
  return truth;
}

json flag_counts(const std::vector<std::uint8_t>& flags) {
  std::size_t border = 0, fallback = 0, not_converged = 0, zero = 0;
  for (std::uint8_t f : flags) {
    border += (f & pipeline::kFlagBorder) != 0;
    fallback += (f & pipeline::kFlagFallback) != 0;
    not_converged += (f & pipeline::kFlagNotConverged) != 0;
    zero += (f & pipeline::kFlagZeroEntry) != 0;
  }
  return {{"border", border}, {"fallback", fallback}, {"not_converged", not_converged},
          {"zero_entry", zero}};
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// run ---------------------------------------------------------------------

struct IoArgs {
  std::string config_path;
  std::string input;
  std::string output;
  std::string truth;
};

int cmd_run(const IoArgs& a, const KeyFlags& flags) {
  const Stopwatch clock;
  const ImageStack stack = io::read_stack(a.input);
  const pipeline::RunConfig cfg = config::run_config_from(merged(a.config_path, flags));
  const auto truth = load_truth(a.truth, stack);
  fs::create_directories(a.output);

  const pipeline::InterferogramSet set = pipeline::run(stack, cfg);
  for (std::size_t k = 0; k < set.pairs.size(); ++k) {
    write_phase_map(a.output, "ifg_" + pair_stem(set.pairs[k]), set.rows, set.cols,
                    set.interferograms[k]);
  }
  write_flags(a.output, set.rows, set.cols, set.flags);
  io::write_raster(fs::path(a.output) / "closure.cofr",
                   RealRaster{1, set.rows, set.cols, set.closure_residual});
  io::write_raster(fs::path(a.output) / "phases.cofr", phases_raster(set.phases));

  json m = manifest_header("run");
  m["input"] = a.input;
  m["config"] = echo(config::to_key_values(cfg));
  m["seed"] = nullptr;
  m["shape"] = {{"p", set.p}, {"rows", set.rows}, {"cols", set.cols}};
  m["pairs"] = pipeline::pairs_to_string(set.pairs);
  m["flags"] = flag_counts(set.flags);
  m["output_closure_bam"] = pipeline::output_closure_residual(set);
  if (truth) {
    m["rmse"] = nullable(pipeline::phase_rmse(set.phases, *truth, set.flags));
    const PhaseImage naive =
        pipeline::naive_phase_image(stack, cfg.window, cfg.border, cfg.threads);
    m["naive_rmse"] = nullable(pipeline::phase_rmse(naive, *truth, set.flags));
  }
  m["wall_time_s"] = clock.seconds();
  write_manifest(a.output, m);
  std::cout << m.dump(2) << '\n';
  return 0;
}

// naive -------------------------------------------------------------------

int cmd_naive(const IoArgs& a, const KeyFlags& flags) {
  const Stopwatch clock;
  const ImageStack stack = io::read_stack(a.input);
  const pipeline::RunConfig cfg = config::run_config_from(merged(a.config_path, flags));
  const auto truth = load_truth(a.truth, stack);
  const auto pairs = pipeline::parse_pairs(cfg.pairs, static_cast<int>(stack.p()));
  fs::create_directories(a.output);

  std::vector<std::uint8_t> all_flags(static_cast<std::size_t>(stack.rows() * stack.cols()), 0);
  for (const auto& pr : pairs) {
    pipeline::NaiveImage img =
        pipeline::naive_interferogram(stack, pr.q, pr.l, cfg.window, cfg.border, cfg.threads);
    for (std::size_t i = 0; i < all_flags.size(); ++i) all_flags[i] |= img.flags[i];
    write_phase_map(a.output, "naive_" + pair_stem(pr), stack.rows(), stack.cols(),
                    std::move(img.phase));
  }
  write_flags(a.output, stack.rows(), stack.cols(), all_flags);

  json m = manifest_header("naive");
  m["input"] = a.input;
  m["config"] = {{"window.height", cfg.window.height},
                 {"window.width", cfg.window.width},
                 {"border", pipeline::to_string(cfg.border)},
                 {"pairs", pipeline::pairs_to_string(pairs)},
                 {"threads", cfg.threads}};
  m["seed"] = nullptr;
  m["flags"] = flag_counts(all_flags);
  if (truth) {
    const PhaseImage naive =
        pipeline::naive_phase_image(stack, cfg.window, cfg.border, cfg.threads);
    m["rmse"] = nullable(pipeline::phase_rmse(naive, *truth, all_flags));
  }
  m["wall_time_s"] = clock.seconds();
  write_manifest(a.output, m);
  std::cout << m.dump(2) << '\n';
  return 0;
}

// closure -----------------------------------------------------------------

int cmd_closure(const IoArgs& a, const KeyFlags& flags) {
  const Stopwatch clock;
  const ImageStack stack = io::read_stack(a.input);
  const pipeline::RunConfig cfg = config::run_config_from(merged(a.config_path, flags));
  cfg.validate(stack.p());
  fs::create_directories(a.output);

  std::vector<float> map = pipeline::closure_map(stack, cfg.window, cfg.chain.estimator,
                                                 cfg.chain.regularizer, cfg.border, cfg.threads);
  // Residuals live in [0, pi]; undefined windows render black.
  std::vector<std::uint8_t> render(map.size(), 0);
  double worst = 0.0, sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!std::isfinite(map[i])) continue;
    render[i] = static_cast<std::uint8_t>(
        std::lround(std::min(1.0, map[i] / std::numbers::pi) * 255.0));
    worst = std::max(worst, static_cast<double>(map[i]));
    sum += map[i];
    ++defined;
  }
  io::write_pgm(fs::path(a.output) / "closure.pgm", stack.rows(), stack.cols(), render);
  io::write_raster(fs::path(a.output) / "closure.cofr",
                   RealRaster{1, stack.rows(), stack.cols(), std::move(map)});

  json m = manifest_header("closure");
  m["input"] = a.input;
  m["config"] = {{"window.height", cfg.window.height},
                 {"window.width", cfg.window.width},
                 {"estimator.kind", estimators::to_string(cfg.chain.estimator.kind)},
                 {"regularizer", regularizers::to_string(cfg.chain.regularizer)},
                 {"border", pipeline::to_string(cfg.border)},
                 {"threads", cfg.threads}};
  m["seed"] = nullptr;
  m["defined_windows"] = defined;
  m["max_residual"] = worst;
  m["mean_residual"] = defined > 0 ? json(sum / static_cast<double>(defined)) : json(nullptr);
  m["wall_time_s"] = clock.seconds();
  write_manifest(a.output, m);
  std::cout << m.dump(2) << '\n';
  return 0;
}

// synth -------------------------------------------------------------------

int cmd_synth(const std::string& config_path, const std::string& output, const KeyFlags& flags) {
  const Stopwatch clock;
  const config::SceneConfig scene = config::scene_config_from(merged(config_path, flags));
  const synth::RenderedScene r = synth::render_stack(scene.model(), scene.rows, scene.cols, scene.seed);
  fs::create_directories(output);
  io::write_stack(fs::path(output) / "stack.cofi", r.stack);
  io::write_raster(fs::path(output) / "truth.cofr", phases_raster(r.truth));

  json m = manifest_header("synth");
  m["config"] = echo(config::to_key_values(scene));
  m["seed"] = scene.seed;
  m["files"] = {"stack.cofi", "truth.cofr"};
  m["wall_time_s"] = clock.seconds();
  write_manifest(output, m);
  std::cout << m.dump(2) << '\n';
  return 0;
}

// bench -------------------------------------------------------------------

struct BenchArgs {
  std::string config_path;
  std::string output;
  std::string sizes = "64";
  int runs = 200;
  std::vector<std::string> chains;
};

std::vector<Index> parse_sizes(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v < 1) throw InvalidArgument("bench: bad sample size '" + item + "'");
    out.push_back(static_cast<Index>(v));
  }
  if (out.empty()) throw InvalidArgument("bench: no sample sizes");
  return out;
}

/// "key=value;key=value" applied on top of a base configuration.
pipeline::RunConfig chain_from(const std::string& spec, pipeline::RunConfig base) {
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidArgument("bench: chain item '" + item + "' lacks '='");
    config::apply_run_key(base, item.substr(0, eq), item.substr(eq + 1));
  }
  base.validate();
  return base;
}

int cmd_bench(const BenchArgs& a, const KeyFlags& flags) {
  const config::KeyValues kv = merged(a.config_path, flags);
  const config::SceneConfig scene = config::scene_config_from(kv);
  const pipeline::RunConfig base = config::run_config_from(kv);
  const std::vector<Index> sizes = parse_sizes(a.sizes);
  if (a.runs < 1) throw InvalidArgument("bench: runs must be positive");

  std::vector<std::pair<std::string, pipeline::RunConfig>> chains;
  if (a.chains.empty()) chains.emplace_back("base", base);
  for (const std::string& c : a.chains) chains.emplace_back(c, chain_from(c, base));

  json m = manifest_header("bench");
  m["config"] = echo(config::to_key_values(scene));
  m["seed"] = scene.seed;
  m["runs"] = a.runs;
  json rows = json::array();

  std::cout << "chain\tn\tmean_rmse\tstd_error\tfallbacks\ttime_s\n";
  auto emit = [&](const std::string& label, Index n, const montecarlo::Summary& s, double t) {
    std::cout << label << '\t' << n << '\t' << s.mean_rmse << '\t' << s.std_error << '\t'
              << s.fallbacks << '\t' << t << '\n';
    rows.push_back({{"chain", label}, {"n", n}, {"mean_rmse", s.mean_rmse},
                    {"std_error", s.std_error}, {"fallbacks", s.fallbacks}, {"time_s", t}});
  };

  for (Index n : sizes) {
    montecarlo::Experiment ex;
    ex.model = scene.model();
    ex.n = n;
    ex.runs = a.runs;
    ex.seed = scene.seed;
    ex.threads = base.threads;
    {
      const Stopwatch clock;
      const montecarlo::Summary s = montecarlo::evaluate_naive(ex);
      emit("naive", n, s, clock.seconds());
    }
    for (const auto& [label, cfg] : chains) {
      const Stopwatch clock;
      const montecarlo::Summary s = montecarlo::evaluate(ex, cfg.chain);
      emit(label, n, s, clock.seconds());
    }
  }
  m["results"] = rows;
  if (!a.output.empty()) {
    std::ofstream out(a.output);
    if (!out) throw io::IoError("cannot write " + a.output);
    out << m.dump(2) << '\n';
  }
  return 0;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covariance-fitting interferometric phase linking"};
  app.set_version_flag("--version", COFIPL_VERSION);
  app.require_subcommand(1);

  IoArgs run_args, naive_args, closure_args;
  KeyFlags run_flags, naive_flags, closure_flags, synth_flags, bench_flags;

  auto add_io = [](CLI::App* sub, IoArgs& a, bool truth) {
    sub->add_option("--config", a.config_path, "key = value configuration file")
        ->check(CLI::ExistingFile);
    sub->add_option("-i,--input", a.input, "COFI1 stack")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output", a.output, "output directory")->required();
    if (truth) {
      sub->add_option("--truth", a.truth, "COFR1 raster of true phases (p channels)")
          ->check(CLI::ExistingFile);
    }
  };

  CLI::App* run = app.add_subcommand("run", "phase linking over every window of a stack");
  add_io(run, run_args, true);
  run_flags.add(*run, config::run_keys());

  CLI::App* naive = app.add_subcommand("naive", "windowed sample covariance interferograms");
  add_io(naive, naive_args, true);
  naive_flags.add(*naive, config::run_keys());

  CLI::App* closure = app.add_subcommand("closure", "closure residual map of the plug-in");
  add_io(closure, closure_args, false);
  closure_flags.add(*closure, config::run_keys());

  std::string synth_config, synth_output;
  CLI::App* synth = app.add_subcommand("synth", "synthetic stack and true phases");
  synth->add_option("--config", synth_config, "key = value configuration file")
      ->check(CLI::ExistingFile);
  synth->add_option("-o,--output", synth_output, "output directory")->required();
  synth_flags.add(*synth, config::scene_keys());

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "Monte-Carlo RMSE table over chains");
  bench->add_option("--config", bench_args.config_path, "key = value configuration file")
      ->check(CLI::ExistingFile);
  bench->add_option("-o,--output", bench_args.output, "JSON results file");
  bench->add_option("--n", bench_args.sizes, "comma separated sample sizes")->capture_default_str();
  bench->add_option("--runs", bench_args.runs, "trials per cell")->capture_default_str();
  bench->add_option("--chain", bench_args.chains,
                    "chain as 'key=value;key=value' over the base config (repeatable)");
  bench_flags.add(*bench, concat(config::run_keys(), config::scene_keys()));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_args, run_flags);
    if (*naive) return cmd_naive(naive_args, naive_flags);
    if (*closure) return cmd_closure(closure_args, closure_flags);
    if (*synth) return cmd_synth(synth_config, synth_output, synth_flags);
    if (*bench) return cmd_bench(bench_args, bench_flags);
  } catch (const std::exception& e) {
    std::cerr << "cofipl: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
