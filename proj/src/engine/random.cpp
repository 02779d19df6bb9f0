#include "causal/engine/random.hpp"

#include <cmath>
#include <numbers>

#include "causal/error.hpp"

namespace causal {

RandomSpec RandomSpec::flat(double lo, double hi) {
  RandomSpec s;
  s.range = Range::Interval;
  s.lo = lo;
  s.hi = hi;
  s.dist = Dist::Flat;
  return s;
}

RandomSpec RandomSpec::flatOver(std::vector<Value> values) {
  RandomSpec s;
  s.range = Range::Finite;
  s.values = std::move(values);
  s.dist = Dist::Flat;
  return s;
}

RandomSpec RandomSpec::gauss(double mean, double sigma) {
  RandomSpec s;
  s.range = Range::Unbounded;
  s.dist = Dist::Gauss;
  s.mean = mean;
  s.sigma = sigma;
  return s;
}

RandomSpec RandomSpec::weighted(std::vector<Value> values, std::vector<double> weights) {
  RandomSpec s;
  s.range = Range::Finite;
  s.values = std::move(values);
  s.dist = Dist::Weights;
  s.weights = std::move(weights);
  return s;
}

RandomSpec RandomSpec::psi(std::vector<Value> values, std::vector<Complex> amplitudes) {
  RandomSpec s;
  s.range = Range::Finite;
  s.values = std::move(values);
  s.dist = Dist::Psi;
  s.amplitudes = std::move(amplitudes);
  return s;
}

std::string toString(RandomSpec::Dist d) {
  switch (d) {
    case RandomSpec::Dist::Flat: return "FLAT";
    case RandomSpec::Dist::Gauss: return "GAUSS";
    case RandomSpec::Dist::Weights: return "WEIGHTS";
    case RandomSpec::Dist::Psi: return "PSI";
  }
  return "?";
}

void RandomSpec::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::RandomError, "random: " + why); };
  if (range == Range::Finite && values.empty()) fail("empty value range");
  if (range == Range::Interval && !(std::isfinite(lo) && std::isfinite(hi))) fail("interval bounds must be finite");
  switch (dist) {
    case Dist::Flat:
      if (range == Range::Interval && !(lo < hi)) fail("FLAT over an interval requires lo < hi");
      if (range == Range::Unbounded) fail("FLAT needs a value range");
      break;
    case Dist::Gauss:
      if (!(sigma > 0.0) || !std::isfinite(sigma)) fail("GAUSS requires sigma > 0");
      if (!std::isfinite(mean)) fail("GAUSS requires a finite mean");
      if (range == Range::Finite) fail("GAUSS needs an interval or unbounded range");
      if (range == Range::Interval && !(lo < hi)) fail("GAUSS over an interval requires lo < hi");
      break;
    case Dist::Weights: {
      if (range != Range::Finite) fail("WEIGHTS needs a finite value list");
      if (weights.size() != values.size()) {
        fail("WEIGHTS has " + std::to_string(weights.size()) + " weights for " + std::to_string(values.size()) +
             " values");
      }
      double total = 0.0;
      for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) fail("WEIGHTS must be finite and non-negative");
        total += w;
      }
      if (!(total > 0.0)) fail("WEIGHTS sum to zero");
      break;
    }
    case Dist::Psi: {
      if (range != Range::Finite) fail("PSI needs a finite value list");
      if (amplitudes.size() != values.size()) {
        fail("PSI has " + std::to_string(amplitudes.size()) + " amplitudes for " + std::to_string(values.size()) +
             " values");
      }
      double total = 0.0;
      for (const auto& a : amplitudes) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) fail("PSI amplitudes must be finite");
        total += std::norm(a);
      }
      if (!(total > 0.0)) fail("PSI amplitudes have zero norm");
      break;
    }
  }
}

std::vector<double> categoricalProbabilities(const RandomSpec& spec) {
  spec.validate();
  if (!spec.categorical()) throw Error(ErrorKind::RandomError, "random: range is not finite");
  const std::size_t n = spec.values.size();
  std::vector<double> p(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    switch (spec.dist) {
      case RandomSpec::Dist::Flat: p[i] = 1.0; break;
      case RandomSpec::Dist::Weights: p[i] = spec.weights[i]; break;
      case RandomSpec::Dist::Psi: p[i] = std::norm(spec.amplitudes[i]); break;
      case RandomSpec::Dist::Gauss: break;
    }
    total += p[i];
  }
  for (auto& x : p) x /= total;
  return p;
}

std::size_t sampleCategorical(const std::vector<double>& probs, RngStream& rng) {
  double total = 0.0;
  for (double p : probs) total += p;
  const double u = rng.nextDouble() * total;
  double cum = 0.0;
  std::size_t last = probs.size();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cum += probs[i];
    last = i;
    if (u < cum) return i;
  }
  if (last == probs.size()) throw Error(ErrorKind::RandomError, "random: no outcome has positive probability");
  return last;
}

namespace {

double standardNormal(RngStream& rng) {
  const double u1 = rng.nextDouble();
  const double u2 = rng.nextDouble();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

Value sampleRandom(const RandomSpec& spec, RngStream& rng) {
  spec.validate();
  if (spec.categorical()) {
    if (spec.dist == RandomSpec::Dist::Flat) return spec.values[rng.nextBelow(spec.values.size())];
    return spec.values[sampleCategorical(categoricalProbabilities(spec), rng)];
  }
  if (spec.dist == RandomSpec::Dist::Flat) return Value::real(spec.lo + (spec.hi - spec.lo) * rng.nextDouble());
  // GAUSS, truncated to [lo, hi) by rejection when a range is given.
  constexpr int kMaxAttempts = 1'000'000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const double x = spec.mean + spec.sigma * standardNormal(rng);
    if (spec.range == RandomSpec::Range::Unbounded || (x >= spec.lo && x < spec.hi)) return Value::real(x);
  }
  throw Error(ErrorKind::RandomError, "random: GAUSS truncation range has negligible mass");
}

}  // namespace causal
