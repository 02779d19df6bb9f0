#include "causal/quantum/ca.hpp"

#include "causal/error.hpp"

namespace causal::quantum {

CaWorld caStep(const CaWorld& world, double alpha) {
  const std::size_t n = world.phi.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "cellular world needs at least one cell");
  const auto cells = static_cast<std::int64_t>(n);
  CaWorld out;
  out.phi.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double lap = world.phi[(j + n - 1) % n] - 2.0 * world.phi[j] + world.phi[(j + 1) % n];
    out.phi[j] = world.phi[j] + alpha * lap;
  }
  out.particles = world.particles;
  std::vector<std::vector<std::size_t>> occupants(n);
  for (std::size_t i = 0; i < out.particles.size(); ++i) {
    auto& p = out.particles[i];
    if (p.cell < 0 || p.cell >= cells) {
      throw Error(ErrorKind::InvalidArgument, "particle " + std::to_string(p.id) + " is off the grid");
    }
    p.cell = ((p.cell + p.v) % cells + cells) % cells;
    occupants[static_cast<std::size_t>(p.cell)].push_back(i);
  }
  for (const auto& group : occupants) {
    if (group.size() < 2) continue;
    const std::int64_t first = out.particles[group[0]].v;
    for (std::size_t k = 0; k + 1 < group.size(); ++k) {
      out.particles[group[k]].v = out.particles[group[k + 1]].v;
    }
    out.particles[group.back()].v = first;
  }
  return out;
}

std::int64_t totalMomentum(const CaWorld& world) {
  std::int64_t s = 0;
  for (const auto& p : world.particles) s += p.v;
  return s;
}

namespace {

const Value& member(const RecordValue& r, const std::string& name) {
  for (const auto& [n, v] : r.members) {
    if (n == name) return v;
  }
  throw Error(ErrorKind::MissingAttribute, "record " + r.name + " has no member '" + name + "'", name);
}

Value& member(RecordValue& r, const std::string& name) {
  for (auto& [n, v] : r.members) {
    if (n == name) return v;
  }
  throw Error(ErrorKind::MissingAttribute, "record " + r.name + " has no member '" + name + "'", name);
}

}  // namespace

CaWorld caWorldFromValue(const Value& v) {
  const auto& rec = v.asRecord();
  CaWorld w;
  w.phi = member(rec, "phi").asVector().items;
  for (const auto& item : member(rec, "particles").asList().items) {
    const auto& p = item.asRecord();
    w.particles.push_back(CaParticle{member(p, "id").asInt(), member(p, "cell").asInt(), member(p, "v").asInt(),
                                     member(p, "species").asInt()});
  }
  return w;
}

Value caWorldToValue(const CaWorld& world, const Value& like) {
  Value out = like;
  auto& rec = out.asRecord();
  member(rec, "phi") = Value::vector(world.phi);
  auto& items = member(rec, "particles").asList().items;
  if (items.size() != world.particles.size()) {
    throw Error(ErrorKind::InvalidArgument, "particle count changed during a cellular update");
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& p = items[i].asRecord();
    member(p, "id") = Value::integer(world.particles[i].id);
    member(p, "cell") = Value::integer(world.particles[i].cell);
    member(p, "v") = Value::integer(world.particles[i].v);
    member(p, "species") = Value::integer(world.particles[i].species);
  }
  return out;
}

std::string caRecordSource(std::size_t cells) {
  return "  record CaParticle { id: int; cell: int in [0, " + std::to_string(cells - 1) +
         "]; v: int in [-2, 2]; species: int in {0, 1}; }\n"
         "  record World { phi: vector(" +
         std::to_string(cells) + ") in [0.0, 1.0]; particles: list(CaParticle, 4); }\n";
}

}  // namespace causal::quantum
