#include "cofipl/config.hpp"

#include "cofipl/ops.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cofipl::config {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw InvalidArgument("config: bad value '" + std::string(value) + "' for key '" +
                        std::string(key) + "'");
}

int to_int(std::string_view key, std::string_view value) {
  value = trim(value);
  int v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value);
  return v;
}

std::uint64_t to_u64(std::string_view key, std::string_view value) {
  value = trim(value);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value);
  return v;
}

double to_double(std::string_view key, std::string_view value) {
  const std::string buf(trim(value));
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size()) bad_value(key, value);
  return v;
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::string section;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw InvalidArgument("config: malformed section header on line " + std::to_string(line_no));
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("config: expected key = value on line " + std::to_string(line_no));
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw InvalidArgument("config: empty key on line " + std::to_string(line_no));
    }
    std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    out[std::move(full)] = std::string(value);
  }
  return out;
}

KeyValues load_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

const std::vector<std::string>& run_keys() {
  static const std::vector<std::string> keys = {
      "window.height",
      "window.width",
      "estimator.kind",
      "estimator.tyler_tol",
      "estimator.tyler_max_iter",
      "regularizer",
      "objective",
      "solver",
      "mm.max_iter",
      "mm.tol",
      "mm.init",
      "mm.safeguard",
      "riemann.method",
      "riemann.max_iter",
      "riemann.grad_tol",
      "riemann.restart_every",
      "riemann.start",
      "riemann.armijo.initial_step",
      "riemann.armijo.contraction",
      "riemann.armijo.slope",
      "riemann.armijo.max_backtracks",
      "border",
      "pairs",
      "threads",
  };
  return keys;
}

const std::vector<std::string>& scene_keys() {
  static const std::vector<std::string> keys = {
      "scene.p",        "scene.rho",      "scene.sigma",    "scene.texture",
      "scene.phase_step", "scene.row_rate", "scene.col_rate", "scene.rows",
      "scene.cols",     "scene.seed",
  };
  return keys;
}

void apply_run_key(pipeline::RunConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  auto& chain = cfg.chain;
  if (key == "window.height") cfg.window.height = to_int(key, value);
  else if (key == "window.width") cfg.window.width = to_int(key, value);
  else if (key == "estimator.kind") chain.estimator.kind = estimators::parse_estimator_kind(value);
  else if (key == "estimator.tyler_tol") chain.estimator.tyler_tol = to_double(key, value);
  else if (key == "estimator.tyler_max_iter") chain.estimator.tyler_max_iter = to_int(key, value);
  else if (key == "regularizer") chain.regularizer = regularizers::parse_regularizer(value);
  else if (key == "objective") chain.objective = objectives::parse_objective_kind(value);
  else if (key == "solver") chain.solver = pipeline::parse_solver_kind(value);
  else if (key == "mm.max_iter") chain.mm.max_iter = to_int(key, value);
  else if (key == "mm.tol") chain.mm.tol = to_double(key, value);
  else if (key == "mm.init") chain.mm.init = mm::parse_init(value);
  else if (key == "mm.safeguard") chain.mm.safeguard = mm::parse_safeguard(value);
  else if (key == "riemann.method") chain.riemann.method = riemann::parse_method(value);
  else if (key == "riemann.max_iter") chain.riemann.max_iter = to_int(key, value);
  else if (key == "riemann.grad_tol") chain.riemann.grad_tol = to_double(key, value);
  else if (key == "riemann.restart_every") chain.riemann.restart_every = to_int(key, value);
  else if (key == "riemann.start") chain.riemann_start = pipeline::parse_riemann_start(value);
  else if (key == "riemann.armijo.initial_step") chain.riemann.armijo.initial_step = to_double(key, value);
  else if (key == "riemann.armijo.contraction") chain.riemann.armijo.contraction = to_double(key, value);
  else if (key == "riemann.armijo.slope") chain.riemann.armijo.slope = to_double(key, value);
  else if (key == "riemann.armijo.max_backtracks") chain.riemann.armijo.max_backtracks = to_int(key, value);
  else if (key == "border") cfg.border = pipeline::parse_border_policy(value);
  else if (key == "pairs") {
    (void)pipeline::parse_pairs(value, 0);
    cfg.pairs = std::string(value);
  } else if (key == "threads") cfg.threads = to_int(key, value);
  else throw InvalidArgument("config: unknown key '" + std::string(key) + "'");
}

void apply_scene_key(SceneConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "scene.p") cfg.p = to_int(key, value);
  else if (key == "scene.rho") cfg.rho = to_double(key, value);
  else if (key == "scene.sigma") cfg.sigma = to_double(key, value);
  else if (key == "scene.texture") {
    if (value != "gaussian" && value.substr(0, 6) != "gamma:") bad_value(key, value);
    if (value != "gaussian") (void)to_double(key, value.substr(6));
    cfg.texture = std::string(value);
  } else if (key == "scene.phase_step") cfg.phase_step = to_double(key, value);
  else if (key == "scene.row_rate") cfg.row_rate = to_double(key, value);
  else if (key == "scene.col_rate") cfg.col_rate = to_double(key, value);
  else if (key == "scene.rows") cfg.rows = to_int(key, value);
  else if (key == "scene.cols") cfg.cols = to_int(key, value);
  else if (key == "scene.seed") cfg.seed = to_u64(key, value);
  else throw InvalidArgument("config: unknown key '" + std::string(key) + "'");
}

synth::SceneModel SceneConfig::model() const {
  synth::SceneModel m;
  m.p = p;
  m.rho = rho;
  if (!(sigma > 0.0)) throw InvalidArgument("scene: sigma must be > 0");
  m.sigmas = RVector::Constant(p, sigma);
  if (texture == "gaussian") {
    m.texture = synth::Texture::Gaussian;
  } else {
    m.texture = synth::Texture::Gamma;
    m.gamma_shape = to_double("scene.texture", std::string_view(texture).substr(6));
  }
  m.phase_field = synth::linear_phase_field(p, phase_step, row_rate, col_rate);
  m.validate();
  return m;
}

pipeline::RunConfig run_config_from(const KeyValues& kv, pipeline::RunConfig base) {
  const auto& scene = scene_keys();
  for (const auto& [key, value] : kv) {
    if (std::find(scene.begin(), scene.end(), key) != scene.end()) continue;
    apply_run_key(base, key, value);
  }
  return base;
}

SceneConfig scene_config_from(const KeyValues& kv, SceneConfig base) {
  const auto& run = run_keys();
  for (const auto& [key, value] : kv) {
    if (std::find(run.begin(), run.end(), key) != run.end()) continue;
    apply_scene_key(base, key, value);
  }
  return base;
}

std::vector<std::pair<std::string, std::string>> to_key_values(const pipeline::RunConfig& cfg) {
  const auto& chain = cfg.chain;
  return {
      {"window.height", std::to_string(cfg.window.height)},
      {"window.width", std::to_string(cfg.window.width)},
      {"estimator.kind", estimators::to_string(chain.estimator.kind)},
      {"estimator.tyler_tol", fmt(chain.estimator.tyler_tol)},
      {"estimator.tyler_max_iter", std::to_string(chain.estimator.tyler_max_iter)},
      {"regularizer", regularizers::to_string(chain.regularizer)},
      {"objective", objectives::to_string(chain.objective)},
      {"solver", pipeline::to_string(chain.solver)},
      {"mm.max_iter", std::to_string(chain.mm.max_iter)},
      {"mm.tol", fmt(chain.mm.tol)},
      {"mm.init", mm::to_string(chain.mm.init)},
      {"mm.safeguard", mm::to_string(chain.mm.safeguard)},
      {"riemann.method", riemann::to_string(chain.riemann.method)},
      {"riemann.max_iter", std::to_string(chain.riemann.max_iter)},
      {"riemann.grad_tol", fmt(chain.riemann.grad_tol)},
      {"riemann.restart_every", std::to_string(chain.riemann.restart_every)},
      {"riemann.start", pipeline::to_string(chain.riemann_start)},
      {"riemann.armijo.initial_step", fmt(chain.riemann.armijo.initial_step)},
      {"riemann.armijo.contraction", fmt(chain.riemann.armijo.contraction)},
      {"riemann.armijo.slope", fmt(chain.riemann.armijo.slope)},
      {"riemann.armijo.max_backtracks", std::to_string(chain.riemann.armijo.max_backtracks)},
      {"border", pipeline::to_string(cfg.border)},
      {"pairs", cfg.pairs},
      {"threads", std::to_string(cfg.threads)},
  };
}

std::vector<std::pair<std::string, std::string>> to_key_values(const SceneConfig& cfg) {
  return {
      {"scene.p", std::to_string(cfg.p)},
      {"scene.rho", fmt(cfg.rho)},
      {"scene.sigma", fmt(cfg.sigma)},
      {"scene.texture", cfg.texture},
      {"scene.phase_step", fmt(cfg.phase_step)},
      {"scene.row_rate", fmt(cfg.row_rate)},
      {"scene.col_rate", fmt(cfg.col_rate)},
      {"scene.rows", std::to_string(cfg.rows)},
      {"scene.cols", std::to_string(cfg.cols)},
      {"scene.seed", std::to_string(cfg.seed)},
  };
}

std::string format_key_values(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

}  // namespace cofipl::config
