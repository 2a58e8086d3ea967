#include "cofipl/pipeline.hpp"

#include "cofipl/ops.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <thread>

namespace cofipl::pipeline {

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::MM: return "mm";
    case SolverKind::Riemann: return "riemann";
    case SolverKind::EMI: return "emi";
  }
  return "unknown";
}

std::string to_string(BorderPolicy policy) {
  return policy == BorderPolicy::Skip ? "skip" : "shrink";
}

SolverKind parse_solver_kind(std::string_view name) {
  if (name == "mm") return SolverKind::MM;
  if (name == "riemann") return SolverKind::Riemann;
  if (name == "emi") return SolverKind::EMI;
  throw InvalidArgument("unknown solver '" + std::string(name) + "'");
}

BorderPolicy parse_border_policy(std::string_view name) {
  if (name == "skip") return BorderPolicy::Skip;
  if (name == "shrink") return BorderPolicy::Shrink;
  throw InvalidArgument("unknown border policy '" + std::string(name) + "'");
}

std::string to_string(RiemannStart start) {
  return start == RiemannStart::Ones ? "ones" : "ls-mm";
}

RiemannStart parse_riemann_start(std::string_view name) {
  if (name == "ones") return RiemannStart::Ones;
  if (name == "ls-mm") return RiemannStart::LsMm;
  throw InvalidArgument("unknown riemann start '" + std::string(name) + "'");
}

void ChainConfig::validate() const {
  estimator.validate();
  regularizer.validate();
  mm.validate();
  riemann.validate();
  if (objective == objectives::ObjectiveKind::WLS && solver != SolverKind::Riemann) {
    throw InvalidArgument("WLS objective requires the Riemannian solver");
  }
}

RVector naive_phases(const PixelPatch& patch, bool* zero_entry) {
  const HermitianMatrix s = estimators::scm(patch);
  RVector theta(patch.p());
  bool zero = false;
  for (Index q = 0; q < patch.p(); ++q) {
    const Complex v = s(q, 0);
    zero = zero || v == Complex(0.0, 0.0);
    theta[q] = v == Complex(0.0, 0.0) ? 0.0 : wrap_angle(std::arg(v));
  }
  theta[0] = 0.0;
  if (zero_entry != nullptr) *zero_entry = zero;
  return theta;
}

PatchResult process_patch_strict(const PixelPatch& patch, const ChainConfig& chain) {
  const HermitianMatrix sigma_hat = estimators::estimate(patch, chain.estimator);
  const HermitianMatrix sigma_tilde = regularizers::apply(chain.regularizer, sigma_hat);
  const objectives::Objective objective = objectives::Objective::build(chain.objective, sigma_tilde);

  PatchResult result;
  switch (chain.solver) {
    case SolverKind::MM: {
      const SolveReport r = mm::mm_solve(objective.kernel(), chain.mm);
      result.phases = r.w.phases();
      result.iterations = r.iterations;
      if (!r.converged) result.flags |= kFlagNotConverged;
      if (r.zero_entry) result.flags |= kFlagZeroEntry;
      break;
    }
    case SolverKind::Riemann: {
      const TorusVector w0 = chain.riemann_start == RiemannStart::Ones
                                 ? TorusVector::ones(sigma_tilde.size())
                                 : mm::mm_solve(objectives::ls_kernel(sigma_tilde), chain.mm).w;
      const SolveReport r = riemann::riemann_solve(objective, chain.riemann, w0);
      result.phases = r.w.phases();
      result.iterations = r.iterations;
      if (!r.converged) result.flags |= kFlagNotConverged;
      if (r.zero_entry) result.flags |= kFlagZeroEntry;
      break;
    }
    case SolverKind::EMI: {
      const mm::EmiResult r = mm::emi_relax(objective.kernel());
      result.phases = r.w.phases();
      if (r.zero_entry) result.flags |= kFlagZeroEntry;
      break;
    }
  }
  result.phases[0] = 0.0;
  return result;
}

PatchResult process_patch(const PixelPatch& patch, const ChainConfig& chain) {
  try {
    return process_patch_strict(patch, chain);
  } catch (const Error& e) {
    PatchResult fallback;
    bool zero = false;
    fallback.phases = naive_phases(patch, &zero);
    fallback.flags = kFlagFallback | (zero ? kFlagZeroEntry : 0);
    fallback.error = e.what();
    return fallback;
  }
}

std::vector<PhasePair> parse_pairs(std::string_view text, int p) {
  std::vector<PhasePair> pairs;
  if (text == "ref") {
    for (int q = 1; q < p; ++q) pairs.push_back({q, 0});
    return pairs;
  }
  if (text == "all") {
    for (int q = 1; q < p; ++q)
      for (int l = 0; l < q; ++l) pairs.push_back({q, l});
    return pairs;
  }
  auto parse_index = [&](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw InvalidArgument("pairs: bad index '" + std::string(s) + "'");
    }
    if (v < 1 || (p > 0 && v > p)) {
      throw InvalidArgument("pairs: index " + std::to_string(v) + " out of range [1, p]");
    }
    return v - 1;
  };
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      throw InvalidArgument("pairs: expected q-l, got '" + std::string(item) + "'");
    }
    pairs.push_back({parse_index(item.substr(0, dash)), parse_index(item.substr(dash + 1))});
  }
  if (pairs.empty()) throw InvalidArgument("pairs: empty selection");
  return pairs;
}

std::string pairs_to_string(const std::vector<PhasePair>& pairs) {
  std::string out;
  for (const PhasePair& pr : pairs) {
    if (!out.empty()) out += ',';
    out += std::to_string(pr.q + 1) + "-" + std::to_string(pr.l + 1);
  }
  return out;
}

void RunConfig::validate(Index p) const {
  if (window.height < 1 || window.width < 1) {
    throw InvalidArgument("window: height and width must be >= 1");
  }
  if (threads < 0) throw InvalidArgument("threads must be >= 0");
  chain.validate();
  if (p > 0) {
    chain.regularizer.validate(p);
    if (chain.estimator.kind == estimators::EstimatorKind::Tyler && window.area() <= p) {
      throw InvalidArgument("Tyler estimator needs window area n > p (n = " +
                            std::to_string(window.area()) + ", p = " + std::to_string(p) + ")");
    }
    (void)parse_pairs(pairs, static_cast<int>(p));
  }
}

WindowBounds window_bounds(Index rows, Index cols, Index row, Index col, const Window& window,
                           BorderPolicy border) {
  const Index h = window.height;
  const Index w = window.width;
  WindowBounds b{row - (h - 1) / 2, col - (w - 1) / 2, h, w, true};
  if (b.top >= 0 && b.left >= 0 && b.top + h <= rows && b.left + w <= cols) {
    return b;
  }
  if (border == BorderPolicy::Skip) {
    b.inside = false;
    return b;
  }
  const Index bottom = std::min(rows, b.top + h);
  const Index right = std::min(cols, b.left + w);
  b.top = std::max<Index>(0, b.top);
  b.left = std::max<Index>(0, b.left);
  b.height = bottom - b.top;
  b.width = right - b.left;
  return b;
}

PixelPatch extract_patch(const ImageStack& stack, const WindowBounds& bounds) {
  CMatrix x(stack.p(), bounds.height * bounds.width);
  Index i = 0;
  for (Index r = bounds.top; r < bounds.top + bounds.height; ++r) {
    for (Index c = bounds.left; c < bounds.left + bounds.width; ++c) {
      x.col(i++) = stack.pixel(r, c);
    }
  }
  return PixelPatch(std::move(x));
}

void for_each_index(Index count, int threads, const std::function<void(Index)>& body) {
  unsigned n = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
  n = std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(std::max<Index>(count, 1))));
  if (n == 1) {
    for (Index i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<Index> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (Index i = next++; i < count; i = next++) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
        next = count;
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

float interferogram_value(const RVector& theta, int q, int l) {
  const auto a = static_cast<std::uint32_t>(to_binary_angle(theta[q]));
  const auto b = static_cast<std::uint32_t>(to_binary_angle(theta[l]));
  return static_cast<float>(from_binary_angle(static_cast<std::int32_t>(a - b)));
}

InterferogramSet run(const ImageStack& stack, const RunConfig& cfg) {
  const Index p = stack.p();
  cfg.validate(p);
  const Index rows = stack.rows();
  const Index cols = stack.cols();
  const std::size_t pixels = static_cast<std::size_t>(rows * cols);

  InterferogramSet out;
  out.p = p;
  out.rows = rows;
  out.cols = cols;
  out.pairs = parse_pairs(cfg.pairs, static_cast<int>(p));
  out.interferograms.assign(out.pairs.size(), std::vector<float>(pixels, 0.0f));
  out.flags.assign(pixels, 0);
  out.closure_residual.assign(pixels, std::numeric_limits<float>::quiet_NaN());
  out.phases = PhaseImage(p, rows, cols);

  for_each_index(rows, cfg.threads, [&](Index r) {
    for (Index c = 0; c < cols; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r * cols + c);
      const WindowBounds b = window_bounds(rows, cols, r, c, cfg.window, cfg.border);
      if (!b.inside) {
        out.flags[idx] = kFlagBorder;
        continue;
      }
      const PixelPatch patch = extract_patch(stack, b);
      const PatchResult res = process_patch(patch, cfg.chain);
      out.flags[idx] = res.flags;
      out.phases.set_pixel(r, c, res.phases);
      for (std::size_t k = 0; k < out.pairs.size(); ++k) {
        out.interferograms[k][idx] = interferogram_value(res.phases, out.pairs[k].q, out.pairs[k].l);
      }
      if (p >= 3) {
        try {
          out.closure_residual[idx] = static_cast<float>(
              phase_closure_residual(estimators::estimate(patch, cfg.chain.estimator)));
        } catch (const Error&) {
          // left as NaN
        }
      }
    }
  });
  return out;
}

NaiveImage naive_interferogram(const ImageStack& stack, int q, int l, const Window& window,
                               BorderPolicy border, int threads) {
  if (q < 0 || l < 0 || q >= stack.p() || l >= stack.p()) {
    throw InvalidArgument("naive_interferogram: image index out of range");
  }
  const Index rows = stack.rows();
  const Index cols = stack.cols();
  NaiveImage out{std::vector<float>(static_cast<std::size_t>(rows * cols), 0.0f),
                 std::vector<std::uint8_t>(static_cast<std::size_t>(rows * cols), 0)};
  for_each_index(rows, threads, [&](Index r) {
    for (Index c = 0; c < cols; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r * cols + c);
      const WindowBounds b = window_bounds(rows, cols, r, c, window, border);
      if (!b.inside) {
        out.flags[idx] = kFlagBorder;
        continue;
      }
      if (q == l) continue;
      Complex acc = 0.0;
      for (Index rr = b.top; rr < b.top + b.height; ++rr) {
        for (Index cc = b.left; cc < b.left + b.width; ++cc) {
          const std::complex<float> xq = stack.at(rr, cc, q);
          const std::complex<float> xl = stack.at(rr, cc, l);
          acc += Complex(xq.real(), xq.imag()) * std::conj(Complex(xl.real(), xl.imag()));
        }
      }
      if (acc == Complex(0.0, 0.0)) {
        out.flags[idx] = kFlagZeroEntry;
      } else {
        out.phase[idx] = static_cast<float>(wrap_angle(std::arg(acc)));
      }
    }
  });
  return out;
}

PhaseImage naive_phase_image(const ImageStack& stack, const Window& window, BorderPolicy border,
                             int threads) {
  const Index rows = stack.rows();
  const Index cols = stack.cols();
  PhaseImage out(stack.p(), rows, cols);
  for_each_index(rows, threads, [&](Index r) {
    for (Index c = 0; c < cols; ++c) {
      const WindowBounds b = window_bounds(rows, cols, r, c, window, border);
      if (!b.inside) continue;
      out.set_pixel(r, c, naive_phases(extract_patch(stack, b)));
    }
  });
  return out;
}

std::vector<float> closure_map(const ImageStack& stack, const Window& window,
                               const estimators::EstimatorConfig& estimator,
                               const regularizers::RegularizerSpec& regularizer,
                               BorderPolicy border, int threads) {
  estimator.validate();
  regularizer.validate(stack.p());
  const Index rows = stack.rows();
  const Index cols = stack.cols();
  std::vector<float> out(static_cast<std::size_t>(rows * cols),
                         std::numeric_limits<float>::quiet_NaN());
  for_each_index(rows, threads, [&](Index r) {
    for (Index c = 0; c < cols; ++c) {
      const WindowBounds b = window_bounds(rows, cols, r, c, window, border);
      if (!b.inside) continue;
      try {
        const HermitianMatrix plug_in =
            regularizers::apply(regularizer, estimators::estimate(extract_patch(stack, b), estimator));
        out[static_cast<std::size_t>(r * cols + c)] =
            static_cast<float>(phase_closure_residual(plug_in));
      } catch (const Error&) {
      }
    }
  });
  return out;
}

std::uint32_t output_closure_residual(const InterferogramSet& set) {
  std::uint32_t worst = 0;
  const Index p = set.p;
  std::vector<std::uint32_t> bam(static_cast<std::size_t>(p));
  for (Index r = 0; r < set.rows; ++r) {
    for (Index c = 0; c < set.cols; ++c) {
      for (Index t = 0; t < p; ++t) {
        bam[t] = static_cast<std::uint32_t>(to_binary_angle(set.phases.at(r, c, t)));
      }
      for (Index q = 0; q < p; ++q) {
        for (Index l = q + 1; l < p; ++l) {
          for (Index j = l + 1; j < p; ++j) {
            const std::uint32_t d_ql = bam[q] - bam[l];
            const std::uint32_t d_lj = bam[l] - bam[j];
            const std::uint32_t d_jq = bam[j] - bam[q];
            const auto sum = static_cast<std::int32_t>(d_ql + d_lj + d_jq);
            const std::uint32_t mag = sum < 0 ? static_cast<std::uint32_t>(-static_cast<std::int64_t>(sum))
                                              : static_cast<std::uint32_t>(sum);
            worst = std::max(worst, mag);
          }
        }
      }
    }
  }
  return worst;
}

double output_closure_residual_float(const InterferogramSet& set) {
  auto find = [&](int q, int l) -> std::pair<int, double> {
    for (std::size_t k = 0; k < set.pairs.size(); ++k) {
      if (set.pairs[k].q == q && set.pairs[k].l == l) return {static_cast<int>(k), 1.0};
      if (set.pairs[k].q == l && set.pairs[k].l == q) return {static_cast<int>(k), -1.0};
    }
    return {-1, 0.0};
  };
  double worst = 0.0;
  const int p = static_cast<int>(set.p);
  for (int q = 0; q < p; ++q) {
    for (int l = q + 1; l < p; ++l) {
      for (int j = l + 1; j < p; ++j) {
        const auto a = find(q, l);
        const auto b = find(l, j);
        const auto c = find(j, q);
        if (a.first < 0 || b.first < 0 || c.first < 0) continue;
        for (std::size_t idx = 0; idx < set.flags.size(); ++idx) {
          const double s = a.second * set.interferograms[a.first][idx] +
                           b.second * set.interferograms[b.first][idx] +
                           c.second * set.interferograms[c.first][idx];
          worst = std::max(worst, std::abs(wrap_angle(s)));
        }
      }
    }
  }
  return worst;
}

double phase_rmse(const PhaseImage& estimate, const PhaseImage& truth,
                  const std::vector<std::uint8_t>& flags, std::uint8_t exclude_flags) {
  if (estimate.p != truth.p || estimate.rows != truth.rows || estimate.cols != truth.cols) {
    throw InvalidArgument("phase_rmse: image shapes differ");
  }
  if (!flags.empty() && flags.size() != static_cast<std::size_t>(estimate.rows * estimate.cols)) {
    throw InvalidArgument("phase_rmse: flag image has the wrong size");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (Index r = 0; r < estimate.rows; ++r) {
    for (Index c = 0; c < estimate.cols; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r * estimate.cols + c);
      if (!flags.empty() && (flags[idx] & exclude_flags) != 0) continue;
      const double ref = truth.at(r, c, 0);
      for (Index t = 1; t < estimate.p; ++t) {
        const double e = wrap_angle(estimate.at(r, c, t) - (truth.at(r, c, t) - ref));
        sum += e * e;
        ++count;
      }
    }
  }
  if (count == 0) throw InvalidArgument("phase_rmse: no pixels to compare");
  return std::sqrt(sum / static_cast<double>(count));
}

}  // namespace cofipl::pipeline
