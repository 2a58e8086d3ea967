#pragma once

#include "cofipl/estimators.hpp"
#include "cofipl/image.hpp"
#include "cofipl/mm.hpp"
#include "cofipl/objectives.hpp"
#include "cofipl/regularizers.hpp"
#include "cofipl/riemann.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace cofipl::pipeline {

enum class SolverKind { MM, Riemann, EMI };
enum class BorderPolicy { Skip, Shrink };
/// Starting point of the Riemannian solver: all ones, or the LS+MM solution
/// of the same plug-in (helps the non-convex WLS objective).
enum class RiemannStart { Ones, LsMm };

std::string to_string(SolverKind kind);
std::string to_string(BorderPolicy policy);
SolverKind parse_solver_kind(std::string_view name);
BorderPolicy parse_border_policy(std::string_view name);
std::string to_string(RiemannStart start);
RiemannStart parse_riemann_start(std::string_view name);

/// Estimator -> regularizer -> objective -> solver, applied to one patch.
struct ChainConfig {
  estimators::EstimatorConfig estimator;
  regularizers::RegularizerSpec regularizer;
  objectives::ObjectiveKind objective = objectives::ObjectiveKind::LS;
  SolverKind solver = SolverKind::MM;
  mm::MmConfig mm;
  riemann::RiemannConfig riemann;
  RiemannStart riemann_start = RiemannStart::Ones;

  /// Rejects combinations that can never work (WLS with MM or EMI).
  void validate() const;
};

/// Per-pixel flag bits.
enum Flag : std::uint8_t {
  kFlagBorder = 1,        ///< window did not fit; pixel not processed
  kFlagFallback = 2,      ///< chain failed; naive estimate written instead
  kFlagNotConverged = 4,  ///< solver stopped without meeting its criterion
  kFlagZeroEntry = 8,     ///< a zero entry went through phase_extract(0) = 1
};

struct PatchResult {
  RVector phases;  ///< referenced, phases[0] == 0
  std::uint8_t flags = 0;
  int iterations = 0;
  std::string error;  ///< reason for the fallback, empty otherwise
};

/// Naive phases arg(S_{q,0}) from the sample covariance of the patch.
RVector naive_phases(const PixelPatch& patch, bool* zero_entry = nullptr);

/// Runs the chain; numerical failures fall back to naive_phases with
/// kFlagFallback set.
PatchResult process_patch(const PixelPatch& patch, const ChainConfig& chain);

/// Same but rethrows numerical failures.
PatchResult process_patch_strict(const PixelPatch& patch, const ChainConfig& chain);

struct Window {
  int height = 8;
  int width = 8;
  Index area() const { return static_cast<Index>(height) * width; }
};

/// (q, l) image indices, zero-based.
struct PhasePair {
  int q;
  int l;
  friend bool operator==(const PhasePair&, const PhasePair&) = default;
};

/// "ref" -> (q, 1) for q = 2..p, "all" -> every q > l, otherwise a comma
/// separated list of one-based "q-l" items.
std::vector<PhasePair> parse_pairs(std::string_view text, int p);
std::string pairs_to_string(const std::vector<PhasePair>& pairs);

struct RunConfig {
  Window window;
  ChainConfig chain;
  BorderPolicy border = BorderPolicy::Skip;
  std::string pairs = "ref";
  int threads = 0;  ///< 0 = hardware concurrency

  /// Checks ranges; with p > 0 also checks p-dependent constraints
  /// (Tyler needs window area > p, low-rank k <= p, pair indices).
  void validate(Index p = 0) const;
};

/// Rows [top, top + height) and cols [left, left + width) of the window
/// centered on (row, col); clipped to the image with BorderPolicy::Shrink.
struct WindowBounds {
  Index top, left, height, width;
  bool inside;
};
WindowBounds window_bounds(Index rows, Index cols, Index row, Index col, const Window& window,
                           BorderPolicy border);

PixelPatch extract_patch(const ImageStack& stack, const WindowBounds& bounds);

struct InterferogramSet {
  Index p = 0;
  Index rows = 0;
  Index cols = 0;
  std::vector<PhasePair> pairs;
  std::vector<std::vector<float>> interferograms;  ///< per pair, row-major
  std::vector<std::uint8_t> flags;
  std::vector<float> closure_residual;  ///< of the unregularized plug-in, NaN if undefined
  PhaseImage phases;                     ///< referenced estimates
};

/// wrap(theta_q - theta_l) computed through binary angles, so the closure of
/// any triplet is exactly zero.
float interferogram_value(const RVector& theta, int q, int l);

/// Processes every window position. Deterministic for a given stack and
/// configuration regardless of the thread count.
InterferogramSet run(const ImageStack& stack, const RunConfig& cfg);

struct NaiveImage {
  std::vector<float> phase;
  std::vector<std::uint8_t> flags;
};

/// arg of the windowed sample covariance entry (q, l). Zero entries give 0
/// with kFlagZeroEntry.
NaiveImage naive_interferogram(const ImageStack& stack, int q, int l, const Window& window,
                               BorderPolicy border = BorderPolicy::Skip, int threads = 0);

/// Naive phases arg(S_{q,0}) for every processed pixel.
PhaseImage naive_phase_image(const ImageStack& stack, const Window& window,
                             BorderPolicy border = BorderPolicy::Skip, int threads = 0);

/// Per-window closure residual of the regularized plug-in; NaN where a
/// tested entry is zero or the window does not fit.
std::vector<float> closure_map(const ImageStack& stack, const Window& window,
                               const estimators::EstimatorConfig& estimator,
                               const regularizers::RegularizerSpec& regularizer,
                               BorderPolicy border = BorderPolicy::Skip, int threads = 0);

/// Largest |closure| of the output interferograms over all triplets and
/// pixels, evaluated in binary-angle arithmetic (one unit = 2 pi / 2^32).
std::uint32_t output_closure_residual(const InterferogramSet& set);

/// Same closure evaluated on the float interferogram values over triplets
/// fully contained in the selected pairs, in radians.
double output_closure_residual_float(const InterferogramSet& set);

/// sqrt(mean wrap(est_q - truth_q)^2) over q >= 1 and pixels whose flag byte
/// has none of `exclude_flags` set. Truth is referenced to image 0 first.
double phase_rmse(const PhaseImage& estimate, const PhaseImage& truth,
                  const std::vector<std::uint8_t>& flags = {},
                  std::uint8_t exclude_flags = kFlagBorder);

void for_each_index(Index count, int threads, const std::function<void(Index)>& body);

}  // namespace cofipl::pipeline
