#pragma once

// Seeded Monte-Carlo estimators of I(f,k) for black-box functions on [0,1]^n:
//   - covariance:      E[f g_k]
//   - derivative:      E[h_k D_(k) f]
//   - difference quotient, with y uniform on [x_(k), x_(k+1)] or drawn from
//     the triangular density proportional to y - x_(k).
// Plus a tensor Gauss-Legendre oracle for n <= 4, run simplex by simplex.
//
// Every sample index owns an independent random stream, and samples are
// accumulated in fixed-size blocks merged in index order, so a given
// (seed, samples) pair produces the same estimate for any thread count.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace osinf {

struct Evaluator {
  unsigned arity = 0;
  std::function<double(std::span<const double>)> value;
  // D_(k) f on the open simplexes; empty when unavailable.
  std::function<double(std::span<const double>, unsigned)> directional_derivative;

  double operator()(std::span<const double> x) const { return value(x); }
  bool has_derivative() const { return static_cast<bool>(directional_derivative); }
};

// Counter-based stream: SplitMix64 keyed by (seed, sample index).
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t state_;
};

// Derives an independent seed for a named sub-computation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

enum class EstimatorKind { RawInnerProduct, Covariance, Derivative, DiffQuotientUniform, DiffQuotientTriangular };

std::string estimator_name(EstimatorKind kind);

struct SamplingOptions {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0x5eed;
  unsigned threads = 1;
};

struct IntegrationEstimate {
  double value = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(samples)
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  EstimatorKind estimator = EstimatorKind::RawInnerProduct;
};

// Sample means and covariance of several per-sample contributions computed on
// the same points.
struct SampleMoments {
  std::uint64_t samples = 0;
  std::vector<double> mean;
  std::vector<double> covariance;  // row-major, unbiased sample covariance

  double cov(std::size_t i, std::size_t j) const { return covariance[i * mean.size() + j]; }
  double std_error(std::size_t i) const;
  // Covariance of the estimated means, cov(i,j) / samples.
  double mean_cov(std::size_t i, std::size_t j) const;
};

// Per-sample kernel: fills `out` with the contributions of sample `index`,
// drawing randomness from `stream`; `point` receives the point used (reported
// when a contribution is non-finite).
using SampleKernel =
    std::function<void(std::uint64_t index, SampleStream& stream, std::span<double> point, std::span<double> out)>;

SampleMoments sample_moments(unsigned arity, std::size_t outputs, const SamplingOptions& options,
                             const SampleKernel& kernel);

void draw_uniform_point(SampleStream& stream, std::span<double> point);

IntegrationEstimate mc_inner_product(const Evaluator& f, const Evaluator& g, const SamplingOptions& options);
IntegrationEstimate influence_mc_covariance(const Evaluator& f, unsigned k, const SamplingOptions& options);
IntegrationEstimate influence_mc_derivative(const Evaluator& f, unsigned k, const SamplingOptions& options);

enum class DiffQuotientVariant { UniformY, TriangularY };

IntegrationEstimate influence_mc_diffquotient(const Evaluator& f, unsigned k, const SamplingOptions& options,
                                              DiffQuotientVariant variant);

IntegrationEstimate influence_mc(const Evaluator& f, unsigned k, EstimatorKind kind, const SamplingOptions& options);

inline constexpr unsigned kMaxTensorArity = 4;

// Gauss-Legendre nodes and weights on [0, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre_unit(unsigned count);

double tensor_quadrature(const Evaluator& f, unsigned nodes_per_axis);

}  // namespace osinf
