#include "osinf/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <thread>

#include "osinf/errors.hpp"
#include "osinf/projection.hpp"

namespace osinf {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kBlockSize = 4096;
constexpr int kMaxTieRedraws = 64;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

SampleStream::SampleStream(std::uint64_t seed, std::uint64_t index)
    : state_(mix64(seed ^ mix64(index * kGolden + 0x632BE59BD9B4E019ULL))) {}

std::uint64_t SampleStream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double SampleStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) { return mix64(seed + mix64(salt + kGolden)); }

std::string estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::RawInnerProduct: return "raw-inner-product";
    case EstimatorKind::Covariance: return "covariance";
    case EstimatorKind::Derivative: return "derivative";
    case EstimatorKind::DiffQuotientUniform: return "diffquotient-uniform";
    case EstimatorKind::DiffQuotientTriangular: return "diffquotient-triangular";
  }
  return "unknown";
}

double SampleMoments::std_error(std::size_t i) const {
  return std::sqrt(std::max(0.0, cov(i, i)) / static_cast<double>(samples));
}

double SampleMoments::mean_cov(std::size_t i, std::size_t j) const {
  return cov(i, j) / static_cast<double>(samples);
}

namespace {

// Running mean and co-moment (sum of centred outer products).
struct BlockSummary {
  std::uint64_t count = 0;
  std::vector<double> mean;
  std::vector<double> comoment;
  std::optional<std::uint64_t> tainted_index;
  std::vector<double> tainted_point;

  explicit BlockSummary(std::size_t d = 0) : mean(d, 0.0), comoment(d * d, 0.0) {}

  void add(std::span<const double> x, std::vector<double>& delta) {
    const std::size_t d = mean.size();
    ++count;
    const double inv = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < d; ++i) {
      delta[i] = x[i] - mean[i];
      mean[i] += delta[i] * inv;
    }
    for (std::size_t i = 0; i < d; ++i) {
      const double after = x[i] - mean[i];
      for (std::size_t j = 0; j < d; ++j) comoment[j * d + i] += delta[j] * after;
    }
  }

  void merge(const BlockSummary& b) {
    if (b.count == 0) return;
    if (count == 0) {
      count = b.count;
      mean = b.mean;
      comoment = b.comoment;
      return;
    }
    const std::size_t d = mean.size();
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(b.count);
    const double total = na + nb;
    std::vector<double> delta(d);
    for (std::size_t i = 0; i < d; ++i) delta[i] = b.mean[i] - mean[i];
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        comoment[i * d + j] += b.comoment[i * d + j] + delta[i] * delta[j] * na * nb / total;
    for (std::size_t i = 0; i < d; ++i) mean[i] += delta[i] * nb / total;
    count += b.count;
  }
};

BlockSummary run_block(std::uint64_t block, std::uint64_t total, unsigned arity, std::size_t outputs,
                       const SamplingOptions& options, const SampleKernel& kernel) {
  BlockSummary summary(outputs);
  std::vector<double> point(arity);
  std::vector<double> out(outputs);
  std::vector<double> delta(outputs);
  const std::uint64_t begin = block * kBlockSize;
  const std::uint64_t end = std::min(total, begin + kBlockSize);
  for (std::uint64_t index = begin; index < end; ++index) {
    SampleStream stream(options.seed, index);
    kernel(index, stream, point, out);
    for (double v : out)
      if (!std::isfinite(v)) {
        summary.tainted_index = index;
        summary.tainted_point = point;
        return summary;
      }
    summary.add(out, delta);
  }
  return summary;
}

}  // namespace

SampleMoments sample_moments(unsigned arity, std::size_t outputs, const SamplingOptions& options,
                             const SampleKernel& kernel) {
  if (options.samples < 2) throw ConfigurationError("Monte-Carlo estimation needs at least 2 samples");
  const std::uint64_t blocks = (options.samples + kBlockSize - 1) / kBlockSize;
  std::vector<BlockSummary> summaries(blocks);
  const unsigned threads =
      static_cast<unsigned>(std::clamp<std::uint64_t>(options.threads == 0 ? 1 : options.threads, 1, blocks));
  if (threads == 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) summaries[b] = run_block(b, options.samples, arity, outputs, options, kernel);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::uint64_t b = t; b < blocks; b += threads)
          summaries[b] = run_block(b, options.samples, arity, outputs, options, kernel);
      });
  }
  BlockSummary total(outputs);
  for (const auto& s : summaries) {
    if (s.tainted_index) {
      std::string msg = "non-finite contribution at sample " + std::to_string(*s.tainted_index) + ", point (";
      for (std::size_t i = 0; i < s.tainted_point.size(); ++i)
        msg += (i ? ", " : "") + std::to_string(s.tainted_point[i]);
      throw TaintedSampleError(msg + ")", s.tainted_point, *s.tainted_index);
    }
    total.merge(s);
  }
  SampleMoments m;
  m.samples = total.count;
  m.mean = total.mean;
  m.covariance = total.comoment;
  for (double& c : m.covariance) c /= static_cast<double>(total.count - 1);
  return m;
}

void draw_uniform_point(SampleStream& stream, std::span<double> point) {
  for (double& v : point) v = stream.uniform();
}

namespace {

void check_rank(const Evaluator& f, unsigned k) {
  if (k < 1 || k > f.arity)
    throw DomainError("rank " + std::to_string(k) + " outside [1, " + std::to_string(f.arity) + "]");
}

IntegrationEstimate single(const SampleMoments& m, const SamplingOptions& options, EstimatorKind kind) {
  return {m.mean[0], m.std_error(0), m.samples, options.seed, kind};
}

// Ascending ranks of x: order[i] is the coordinate holding x_(i+1).
void rank_point(std::span<const double> x, std::vector<unsigned>& order, std::vector<double>& sorted) {
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](unsigned a, unsigned b) { return x[a] < x[b]; });
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = x[order[i]];
}

// True when x_(k) ties with a neighbouring order statistic.
bool tied_near(std::span<const double> sorted, unsigned k) {
  const std::size_t i = k - 1;
  if (i > 0 && sorted[i - 1] == sorted[i]) return true;
  if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) return true;
  return false;
}

// Draws a point whose k-th order statistic is untied.
void draw_untied(SampleStream& stream, std::span<double> point, unsigned k, std::vector<unsigned>& order,
                 std::vector<double>& sorted) {
  for (int attempt = 0; attempt < kMaxTieRedraws; ++attempt) {
    draw_uniform_point(stream, point);
    rank_point(point, order, sorted);
    if (!tied_near(sorted, k)) return;
  }
  throw NumericalError("could not draw an untied sample point");
}

}  // namespace

IntegrationEstimate mc_inner_product(const Evaluator& f, const Evaluator& g, const SamplingOptions& options) {
  if (f.arity != g.arity) throw DomainError("inner product of evaluators with different arity");
  const auto m = sample_moments(f.arity, 1, options, [&](std::uint64_t, SampleStream& s, std::span<double> x, std::span<double> out) {
    draw_uniform_point(s, x);
    out[0] = f(x) * g(x);
  });
  return single(m, options, EstimatorKind::RawInnerProduct);
}

IntegrationEstimate influence_mc_covariance(const Evaluator& f, unsigned k, const SamplingOptions& options) {
  check_rank(f, k);
  const auto m = sample_moments(f.arity, 1, options, [&](std::uint64_t, SampleStream& s, std::span<double> x, std::span<double> out) {
    draw_uniform_point(s, x);
    const auto sorted = sorted_copy(x);
    out[0] = f(x) * g_basis_value(sorted, k);
  });
  return single(m, options, EstimatorKind::Covariance);
}

IntegrationEstimate influence_mc_derivative(const Evaluator& f, unsigned k, const SamplingOptions& options) {
  check_rank(f, k);
  if (!f.has_derivative()) throw ConfigurationError("derivative estimator needs a directional-derivative map");
  const unsigned n = f.arity;
  const auto m = sample_moments(n, 1, options, [&](std::uint64_t, SampleStream& s, std::span<double> x, std::span<double> out) {
    std::vector<unsigned> order(n);
    std::vector<double> sorted(n);
    draw_untied(s, x, k, order, sorted);
    const double weight = h_density_value(sorted, k);
    out[0] = weight == 0.0 ? 0.0 : weight * f.directional_derivative(x, k);
  });
  return single(m, options, EstimatorKind::Derivative);
}

IntegrationEstimate influence_mc_diffquotient(const Evaluator& f, unsigned k, const SamplingOptions& options,
                                              DiffQuotientVariant variant) {
  check_rank(f, k);
  const unsigned n = f.arity;
  const double scale = static_cast<double>(n + 1) * static_cast<double>(n + 2);
  const auto m = sample_moments(n, 1, options, [&](std::uint64_t, SampleStream& s, std::span<double> x, std::span<double> out) {
    std::vector<unsigned> order(n);
    std::vector<double> sorted(n);
    draw_untied(s, x, k, order, sorted);
    const double lo = sorted[k - 1];
    const double hi = k < n ? sorted[k] : 1.0;
    const double width = hi - lo;
    const double u = s.uniform();
    if (width <= 0.0) {
      out[0] = 0.0;
      return;
    }
    const double step = variant == DiffQuotientVariant::UniformY ? width * u : width * std::sqrt(u);
    std::vector<double> moved(x.begin(), x.end());
    moved[order[k - 1]] = lo + step;
    const double increment = f(moved) - f(x);
    if (variant == DiffQuotientVariant::UniformY) {
      out[0] = scale * width * increment;
    } else {
      // Density (n+1)(n+2)(y - x_(k)) has mass scale * width^2 / 2 over the interval.
      out[0] = step > 0.0 ? scale * 0.5 * width * width * (increment / step) : 0.0;
    }
  });
  return single(m, options,
                variant == DiffQuotientVariant::UniformY ? EstimatorKind::DiffQuotientUniform
                                                         : EstimatorKind::DiffQuotientTriangular);
}

IntegrationEstimate influence_mc(const Evaluator& f, unsigned k, EstimatorKind kind, const SamplingOptions& options) {
  switch (kind) {
    case EstimatorKind::Covariance: return influence_mc_covariance(f, k, options);
    case EstimatorKind::Derivative: return influence_mc_derivative(f, k, options);
    case EstimatorKind::DiffQuotientUniform: return influence_mc_diffquotient(f, k, options, DiffQuotientVariant::UniformY);
    case EstimatorKind::DiffQuotientTriangular:
      return influence_mc_diffquotient(f, k, options, DiffQuotientVariant::TriangularY);
    case EstimatorKind::RawInnerProduct: break;
  }
  throw ConfigurationError("raw inner product is not an influence estimator");
}

QuadratureRule gauss_legendre_unit(unsigned count) {
  if (count < 1) throw ConfigurationError("Gauss-Legendre rule needs at least one node");
  QuadratureRule rule{std::vector<double>(count), std::vector<double>(count)};
  const double n = static_cast<double>(count);
  for (unsigned i = 0; i < (count + 1) / 2; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (unsigned j = 2; j <= count; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = z;
    for (unsigned j = 2; j <= count; ++j) {
      const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    if (count == 1) p0 = 1.0;
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // Map [-1, 1] to [0, 1].
    rule.nodes[i] = 0.5 * (1.0 - z);
    rule.nodes[count - 1 - i] = 0.5 * (1.0 + z);
    rule.weights[i] = 0.5 * w;
    rule.weights[count - 1 - i] = 0.5 * w;
  }
  return rule;
}

double tensor_quadrature(const Evaluator& f, unsigned nodes_per_axis) {
  if (f.arity < 1 || f.arity > kMaxTensorArity)
    throw ConfigurationError("tensor quadrature supports 1 <= n <= " + std::to_string(kMaxTensorArity));
  if (nodes_per_axis < 2) throw ConfigurationError("tensor quadrature needs at least 2 nodes per axis");
  const auto rule = gauss_legendre_unit(nodes_per_axis);
  const unsigned n = f.arity;
  // The tensor rule runs on each ordered simplex x_pi(1) <= ... <= x_pi(n),
  // collapsed to the cube by y_n = u_n, y_k = u_k y_(k+1), so kinks along
  // x_i = x_j fall on cell boundaries.
  std::vector<unsigned> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::vector<unsigned> idx(n);
  std::vector<double> y(n), x(n);
  double total = 0.0;
  do {
    std::fill(idx.begin(), idx.end(), 0u);
    while (true) {
      double w = 1.0;
      double upper = 1.0;
      for (unsigned k = n; k-- > 0;) {
        y[k] = rule.nodes[idx[k]] * upper;
        w *= rule.weights[idx[k]] * upper;
        upper = y[k];
      }
      for (unsigned k = 0; k < n; ++k) x[perm[k]] = y[k];
      total += w * f(x);
      unsigned axis = 0;
      while (axis < n && ++idx[axis] == nodes_per_axis) idx[axis++] = 0;
      if (axis == n) break;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace osinf
