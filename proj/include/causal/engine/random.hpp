#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "causal/core/value.hpp"
#include "causal/engine/rng.hpp"

namespace causal {

// Arguments of the RANDOM(valuerange, probabilitydistribution) primitive.
struct RandomSpec {
  enum class Range { Interval, Finite, Unbounded };
  enum class Dist { Flat, Gauss, Weights, Psi };

  Range range = Range::Interval;
  double lo = 0.0;  // interval [lo, hi)
  double hi = 1.0;
  std::vector<Value> values;  // finite range

  Dist dist = Dist::Flat;
  double mean = 0.0;
  double sigma = 1.0;
  std::vector<double> weights;
  std::vector<Complex> amplitudes;

  static RandomSpec flat(double lo, double hi);
  static RandomSpec flatOver(std::vector<Value> values);
  static RandomSpec gauss(double mean, double sigma);
  static RandomSpec weighted(std::vector<Value> values, std::vector<double> weights);
  static RandomSpec psi(std::vector<Value> values, std::vector<Complex> amplitudes);

  bool categorical() const { return range == Range::Finite; }

  // Throws Error(RandomError) on empty ranges, nonpositive sigma, length
  // mismatches, negative or all-zero weights.
  void validate() const;
};

std::string toString(RandomSpec::Dist d);

// Outcome probabilities of a categorical spec. FLAT is equiprobable, WEIGHTS
// normalizes w_i, PSI uses |a_i|^2 / sum |a_j|^2.
std::vector<double> categoricalProbabilities(const RandomSpec& spec);

Value sampleRandom(const RandomSpec& spec, RngStream& rng);

// Index in [0, probs.size()) drawn with the given probabilities.
std::size_t sampleCategorical(const std::vector<double>& probs, RngStream& rng);

// Where transitions obtain random values. Ordinary runs sample from a seeded
// stream; the many-worlds mode substitutes a branching source.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual Value draw(const RandomSpec& spec) = 0;
};

class StreamRandomSource final : public RandomSource {
 public:
  explicit StreamRandomSource(RngStream& rng) : rng_(rng) {}
  Value draw(const RandomSpec& spec) override { return sampleRandom(spec, rng_); }
  RngStream& stream() { return rng_; }

 private:
  RngStream& rng_;
};

}  // namespace causal
