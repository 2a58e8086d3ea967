#include "cofipl/regularizers.hpp"

#include "cofipl/ops.hpp"
#include "cofipl/spectral.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace cofipl::regularizers {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, std::string_view what) {
  std::string buf(trim(s));
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size()) {
    throw InvalidArgument("regularizer: bad number '" + buf + "' for " + std::string(what));
  }
  return v;
}

int parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidArgument("regularizer: bad integer '" + std::string(s) + "' for " +
                          std::string(what));
  }
  return v;
}

struct SortedEigen {
  RVector values;  // descending
  CMatrix vectors;
};

SortedEigen descending_eigen(const HermitianMatrix& sigma) {
  const spectral::Decomposition e = spectral::eigh(sigma);
  const Index p = e.values.size();
  // Eigen returns ascending order; reversing is a stable descending order
  // for distinct values and keeps tied blocks contiguous.
  SortedEigen out{RVector(p), CMatrix(p, p)};
  for (Index i = 0; i < p; ++i) {
    out.values[i] = e.values[p - 1 - i];
    out.vectors.col(i) = e.vectors.col(p - 1 - i);
  }
  return out;
}

void check_psd(const RVector& values, double trace) {
  const double floor = -1e-8 * std::abs(trace);
  if (values.minCoeff() < floor) {
    throw NumericalError("lowrank: input is not positive semi-definite");
  }
}

void check_rank(int k, Index p) {
  if (k < 1 || k > p) {
    throw InvalidArgument("lowrank: k must lie in [1, p]");
  }
}

}  // namespace

void RegularizerSpec::validate(Index p) const {
  for (const Step& step : steps) {
    std::visit(overloaded{
                   [](const Shrinkage& s) {
                     if (!(s.beta >= 0.0 && s.beta <= 1.0)) {
                       throw InvalidArgument("shrinkage: beta must lie in [0, 1]");
                     }
                   },
                   [p](const LowRank& l) {
                     if (l.k < 1 || (p > 0 && l.k > p)) {
                       throw InvalidArgument("lowrank: k must lie in [1, p]");
                     }
                   },
                   [](const Taper& t) {
                     if (t.bandwidth < 0) {
                       throw InvalidArgument("taper: bandwidth must be >= 0");
                     }
                   },
               },
               step);
  }
}

RegularizerSpec parse_regularizer(std::string_view text) {
  RegularizerSpec spec;
  text = trim(text);
  if (text.empty() || text == "none") {
    return spec;
  }
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw InvalidArgument("regularizer: expected name:value, got '" + std::string(item) + "'");
    }
    const std::string_view name = trim(item.substr(0, colon));
    const std::string_view value = item.substr(colon + 1);
    if (name == "shrinkage" || name == "shrink") {
      spec.steps.emplace_back(Shrinkage{parse_double(value, name)});
    } else if (name == "lowrank" || name == "low-rank") {
      spec.steps.emplace_back(LowRank{parse_int(value, name)});
    } else if (name == "taper") {
      spec.steps.emplace_back(Taper{parse_int(value, name)});
    } else {
      throw InvalidArgument("regularizer: unknown step '" + std::string(name) + "'");
    }
  }
  spec.validate();
  return spec;
}

std::string to_string(const RegularizerSpec& spec) {
  if (spec.steps.empty()) {
    return "none";
  }
  std::ostringstream os;
  bool first = true;
  for (const Step& step : spec.steps) {
    if (!first) os << ',';
    first = false;
    std::visit(overloaded{
                   [&](const Shrinkage& s) { os << "shrinkage:" << format_double(s.beta); },
                   [&](const LowRank& l) { os << "lowrank:" << l.k; },
                   [&](const Taper& t) { os << "taper:" << t.bandwidth; },
               },
               step);
  }
  return os.str();
}

HermitianMatrix shrink_identity(const HermitianMatrix& sigma, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw InvalidArgument("shrinkage: beta must lie in [0, 1]");
  }
  const Index p = sigma.size();
  const double level = (1.0 - beta) * sigma.trace() / static_cast<double>(p);
  CMatrix out = beta * sigma.matrix();
  out.diagonal().array() += level;
  return HermitianMatrix::symmetrize(out);
}

HermitianMatrix lowrank_project(const HermitianMatrix& sigma, int k) {
  const Index p = sigma.size();
  check_rank(k, p);
  if (k == p) {
    return sigma;
  }
  SortedEigen e = descending_eigen(sigma);
  check_psd(e.values, sigma.trace());
  const double tail_mean = e.values.tail(p - k).mean();
  e.values.tail(p - k).setConstant(tail_mean);
  CMatrix out = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  return HermitianMatrix::symmetrize(out);
}

HermitianMatrix lowrank_truncate(const HermitianMatrix& sigma, int k) {
  const Index p = sigma.size();
  check_rank(k, p);
  if (k == p) {
    return sigma;
  }
  SortedEigen e = descending_eigen(sigma);
  check_psd(e.values, sigma.trace());
  const auto lead = e.vectors.leftCols(k);
  CMatrix out = lead * e.values.head(k).cast<Complex>().asDiagonal() * lead.adjoint();
  return HermitianMatrix::symmetrize(out);
}

HermitianMatrix taper(const HermitianMatrix& sigma, int bandwidth) {
  if (bandwidth < 0) {
    throw InvalidArgument("taper: bandwidth must be >= 0");
  }
  const Index p = sigma.size();
  CMatrix out = sigma.matrix();
  for (Index q = 0; q < p; ++q) {
    for (Index l = 0; l < p; ++l) {
      if (std::abs(q - l) > bandwidth) {
        out(q, l) = 0.0;
      }
    }
  }
  return HermitianMatrix::symmetrize(out);
}

HermitianMatrix apply(const RegularizerSpec& spec, const HermitianMatrix& sigma) {
  spec.validate(sigma.size());
  HermitianMatrix current = sigma;
  for (const Step& step : spec.steps) {
    current = std::visit(
        overloaded{
            [&](const Shrinkage& s) { return shrink_identity(current, s.beta); },
            [&](const LowRank& l) { return lowrank_project(current, l.k); },
            [&](const Taper& t) { return taper(current, t.bandwidth); },
        },
        step);
  }
  return current;
}

}  // namespace cofipl::regularizers
