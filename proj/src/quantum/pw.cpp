#include "causal/quantum/pw.hpp"

#include <algorithm>
#include <cmath>

#include "causal/error.hpp"

namespace causal::quantum {

namespace {

std::size_t requireAttribute(const PwCollection& pw, std::string_view name) {
  auto idx = pw.attributeIndex(name);
  if (!idx) {
    throw Error(ErrorKind::MissingAttribute, "pw collection has no '" + std::string(name) + "' attribute",
                std::string(name));
  }
  return *idx;
}

std::vector<Value> indexValues(std::size_t n) {
  std::vector<Value> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(Value::integer(static_cast<std::int64_t>(i)));
  return out;
}

}  // namespace

PwCollection pwPropagate(const PwCollection& pw, double dt, bool phase) {
  const std::size_t pos = requireAttribute(pw, "position");
  const std::size_t vel = requireAttribute(pw, "velocity");
  const std::size_t omega = phase ? requireAttribute(pw, "omega") : 0;
  PwCollection out = pw;
  for (std::size_t path = 0; path < pw.pathCount(); ++path) {
    for (std::size_t k = 0; k < pw.particleCount(); ++k) {
      out.setValue(path, k, pos, pw.value(path, k, pos) + pw.value(path, k, vel) * dt);
    }
    if (phase) out.setAmplitude(path, pw.amplitude(path) * std::polar(1.0, pw.value(path, 0, omega) * dt));
  }
  return out;
}

std::vector<double> pathProbabilities(const PwCollection& pw) {
  const double total = pw.norm2();
  if (!(total > 0.0)) throw Error(ErrorKind::ZeroNorm, "pw collection has zero norm");
  std::vector<double> p;
  p.reserve(pw.pathCount());
  for (const auto& a : pw.amplitudes()) p.push_back(std::norm(a) / total);
  return p;
}

Collapse pwInteract(const PwCollection& pw, RandomSource& random) {
  if (pw.pathCount() == 0 || !(pw.norm2() > 0.0)) throw Error(ErrorKind::ZeroNorm, "pw collection has zero norm");
  const auto amps = pw.amplitudes();
  const auto spec = RandomSpec::psi(indexValues(pw.pathCount()), std::vector<Complex>(amps.begin(), amps.end()));
  const auto path = static_cast<std::size_t>(random.draw(spec).asInt());
  Collapse c{path, pw.onlyPath(path)};
  c.collapsed.normalize();
  return c;
}

Collapse pwInteract(const PwCollection& pw, RngStream& rng) {
  StreamRandomSource source(rng);
  return pwInteract(pw, source);
}

std::vector<double> detectProbabilities(const PwCollection& pw, std::span<const double> edges, DetectMode mode) {
  if (edges.size() < 2) throw Error(ErrorKind::InvalidArgument, "detector needs at least two bin edges");
  if (!std::is_sorted(edges.begin(), edges.end()) ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw Error(ErrorKind::InvalidArgument, "bin edges must be strictly increasing");
  }
  const std::size_t pos = requireAttribute(pw, "position");
  const std::size_t bins = edges.size() - 1;
  std::vector<Complex> coherent(bins);
  std::vector<double> weights(bins, 0.0);
  for (std::size_t path = 0; path < pw.pathCount(); ++path) {
    const double x = pw.value(path, 0, pos);
    if (!(x >= edges.front() && x <= edges.back())) {
      throw Error(ErrorKind::PositionOutOfBins,
                  "path " + std::to_string(path) + " lands at " + render(Value::real(x)) + ", outside the detector");
    }
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    std::size_t bin = static_cast<std::size_t>(it - edges.begin()) - 1;
    if (bin >= bins) bin = bins - 1;
    coherent[bin] += pw.amplitude(path);
    weights[bin] += std::norm(pw.amplitude(path));
  }
  if (mode == DetectMode::Coherent) {
    for (std::size_t i = 0; i < bins; ++i) weights[i] = std::norm(coherent[i]);
  }
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw Error(ErrorKind::ZeroNorm, "every detector bin has zero probability");
  for (double& w : weights) w /= total;
  return weights;
}

std::size_t pwDetect(const PwCollection& pw, std::span<const double> edges, DetectMode mode, RandomSource& random) {
  const auto probs = detectProbabilities(pw, edges, mode);
  const auto spec = RandomSpec::weighted(indexValues(probs.size()), probs);
  return static_cast<std::size_t>(random.draw(spec).asInt());
}

std::size_t pwDetect(const PwCollection& pw, std::span<const double> edges, DetectMode mode, RngStream& rng) {
  StreamRandomSource source(rng);
  return pwDetect(pw, edges, mode, source);
}

}  // namespace causal::quantum
