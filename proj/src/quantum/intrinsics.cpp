#include "causal/quantum/intrinsics.hpp"

#include "causal/error.hpp"
#include "causal/quantum/ca.hpp"
#include "causal/quantum/numerics.hpp"
#include "causal/quantum/pw.hpp"

namespace causal {

namespace quantum {

namespace {

using Kind = TypeDesc::Kind;
using Records = std::map<std::string, RecordDecl>;
using Args = std::span<const TypeDesc>;

Intrinsic make(std::string name, std::size_t minArgs, std::size_t maxArgs, bool stochastic = false) {
  Intrinsic in;
  in.name = std::move(name);
  in.category = Intrinsic::Category::Quantum;
  in.minArgs = minArgs;
  in.maxArgs = maxArgs;
  in.stochastic = stochastic;
  return in;
}

bool isRealList(const TypeDesc& t) {
  return t.kind == Kind::Vector || (t.kind == Kind::List && t.element && t.element->isNumeric());
}

std::vector<double> reals(const Value& v) {
  if (v.kind() == Kind::Vector) return v.asVector().items;
  std::vector<double> out;
  for (const auto& item : v.asList().items) out.push_back(item.toDouble());
  return out;
}

bool hasRealMembers(const RecordDecl& decl, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    auto idx = decl.memberIndex(n);
    if (!idx || decl.members[*idx].second.kind != Kind::Real) return false;
  }
  return true;
}

bool isCaParticle(const TypeDesc& t, const Records& records) {
  if (t.kind != Kind::Record) return false;
  const auto& decl = records.at(t.recordName);
  for (const char* n : {"id", "cell", "v", "species"}) {
    auto idx = decl.memberIndex(n);
    if (!idx || decl.members[*idx].second.kind != Kind::Int) return false;
  }
  return true;
}

bool isCaWorld(const TypeDesc& t, const Records& records) {
  if (t.kind != Kind::Record) return false;
  const auto& decl = records.at(t.recordName);
  auto phi = decl.memberIndex("phi");
  auto particles = decl.memberIndex("particles");
  if (!phi || !particles || decl.members[*phi].second.kind != Kind::Vector) return false;
  const auto& list = decl.members[*particles].second;
  return list.kind == Kind::List && isCaParticle(*list.element, records);
}

Value stepParticleRecord(const Value& rec, const RealFn& grad, double dt) {
  Value out = rec;
  auto& members = out.asRecord().members;
  auto find = [&](const char* n) -> Value& {
    for (auto& [name, v] : members) {
      if (name == n) return v;
    }
    throw Error(ErrorKind::MissingAttribute, std::string("record has no member '") + n + "'", n);
  };
  std::vector<Particle1D> ps{{find("m").asReal(), find("x").asReal(), find("v").asReal()}};
  classicalStep(ps, grad, dt);
  find("x") = Value::real(ps[0].x);
  find("v") = Value::real(ps[0].v);
  return out;
}

Value collapseWithStream(const PwCollection& pw, IntrinsicContext& ctx) {
  if (!ctx.random) throw Error(ErrorKind::RandomError, "pw_interact needs a random source");
  return Value::pw(pwInteract(pw, *ctx.random).collapsed);
}

}  // namespace

void registerQuantumIntrinsics(IntrinsicRegistry& registry) {
  {
    Intrinsic in = make("schrodinger_step", 4, 4);
    in.result = [](Args a, const Records&, std::string& why) -> std::optional<TypeDesc> {
      if (a[0].kind != Kind::CGrid) {
        why = "first argument must be a cgrid";
        return std::nullopt;
      }
      const bool scalar = a[1].isNumeric();
      const bool perCell = (a[1].kind == Kind::Vector && a[1].length == a[0].length) || a[1].kind == Kind::List;
      if (!scalar && !perCell) {
        why = "potential must be a real number or a vector(" + std::to_string(a[0].length) + ")";
        return std::nullopt;
      }
      if (!a[2].isNumeric() || !a[3].isNumeric()) {
        why = "mass and hbar must be real numbers";
        return std::nullopt;
      }
      return TypeDesc::cgrid(a[0].length, a[0].dx);
    };
    in.eval = [](std::span<const Value> a, std::span<const RealFn>, IntrinsicContext& ctx) {
      const auto& psi = a[0].asGrid();
      std::vector<double> V;
      if (a[1].isReal() || a[1].isInt()) {
        V.assign(psi.cells.size(), a[1].toDouble());
      } else {
        V = reals(a[1]);
      }
      return Value::grid(schrodingerStep(psi, V, a[2].toDouble(), a[3].toDouble(), ctx.dt).cells, psi.dx);
    };
    registry.add(std::move(in));
  }
  {
    Intrinsic in = make("gaussian_packet", 4, 4);
    in.result = [](Args a, const Records&, std::string& why) -> std::optional<TypeDesc> {
      if (a[0].kind != Kind::CGrid || !a[1].isNumeric() || !a[2].isNumeric() || !a[3].isNumeric()) {
        why = "expected (cgrid, x0, sigma, k0)";
        return std::nullopt;
      }
      return TypeDesc::cgrid(a[0].length, a[0].dx);
    };
    in.eval = [](std::span<const Value> a, std::span<const RealFn>, IntrinsicContext&) {
      const auto& g = a[0].asGrid();
      auto packet = gaussianPacket(g.cells.size(), g.dx, a[1].toDouble(), a[2].toDouble(), a[3].toDouble());
      return Value::grid(std::move(packet.cells), g.dx);
    };
    registry.add(std::move(in));
  }
  using GridFn = double (*)(const ComplexGrid&);
  const std::pair<const char*, GridFn> gridObservables[] = {
      {"grid_norm", gridNorm}, {"grid_mean", gridMean}, {"grid_variance", gridVariance}};
  for (const auto& [name, fn] : gridObservables) {
    Intrinsic in = make(name, 1, 1);
    in.result = [](Args a, const Records&, std::string& why) -> std::optional<TypeDesc> {
      if (a[0].kind != Kind::CGrid) {
        why = "argument must be a cgrid";
        return std::nullopt;
      }
      return TypeDesc::real();
    };
    in.eval = [fn = fn](std::span<const Value> a, std::span<const RealFn>, IntrinsicContext&) {
      return Value::real(fn(a[0].asGrid()));
    };
    registry.add(std::move(in));
  }
  {
    Intrinsic in = make("classical_step", 2, 2);
    in.lambdaArgs = {1};
    in.result = [](Args a, const Records& records, std::string& why) -> std::optional<TypeDesc> {
      const TypeDesc* rec = &a[0];
      if (rec->kind == Kind::List) rec = rec->element.get();
      if (rec->kind != Kind::Record || !hasRealMembers(records.at(rec->recordName), {"m", "x", "v"})) {
        why = "first argument must be a record (or list of records) with real members m, x, v";
        return std::nullopt;
      }
      TypeDesc out = a[0];
      out.domain.reset();
      return out;
    };
    in.eval = [](std::span<const Value> a, std::span<const RealFn> fns, IntrinsicContext& ctx) {
      if (a[0].kind() == Kind::List) {
        std::vector<Value> items;
        for (const auto& p : a[0].asList().items) items.push_back(stepParticleRecord(p, fns[0], ctx.dt));
        return Value::list(std::move(items));
      }
      return stepParticleRecord(a[0], fns[0], ctx.dt);
    };
    registry.add(std::move(in));
  }
  {
    Intrinsic in = make("pw_propagate", 1, 2);
    in.result = [](Args a, const Records&, std::string& why) -> std::optional<TypeDesc> {
      if (a[0].kind != Kind::Pw || (a.size() == 2 && a[1].kind != Kind::Bool)) {
        why = "expected (pw[, phase: bool])";
        return std::nullopt;
      }
      return a[0];
    };
    in.eval = [](std::span<const Value> a, std::span<const RealFn>, IntrinsicContext& ctx) {
      const bool phase = a.size() == 2 && a[1].asBool();
      return Value::pw(pwPropagate(a[0].asPw(), ctx.dt, phase));
    };
    registry.add(std::move(in));
  }
  {
    Intrinsic in = make("pw_interact", 1, 1, true);
    in.result = [](Args a, const Records&, std::string& why) -> std::optional<TypeDesc> {
      if (a[0].kind != Kind::Pw) {
        why = "argument must be a pw collection";
        return std::nullopt;
      }
      return a[0];
    };
    in.eval = [](std::span<const Value> a, std::span<const RealFn>, IntrinsicContext& ctx) {
      return collapseWithStream(a[0].asPw(), ctx);
    };
    registry.add(std::move(in));
  }
  {
    Intrinsic in = make("pw_detect", 3, 3, true);
    in.result = [](Args a, const Records&, std::string& why) -> std::optional<TypeDesc> {
      if (a[0].kind != Kind::Pw || !isRealList(a[1]) || a[2].kind != Kind::Bool) {
        why = "expected (pw, bin edges, marked: bool)";
        return std::nullopt;
      }
      return TypeDesc::integer();
    };
    in.eval = [](std::span<const Value> a, std::span<const RealFn>, IntrinsicContext& ctx) {
      if (!ctx.random) throw Error(ErrorKind::RandomError, "pw_detect needs a random source");
      const auto edges = reals(a[1]);
      const auto mode = a[2].asBool() ? DetectMode::Marked : DetectMode::Coherent;
      return Value::integer(static_cast<std::int64_t>(pwDetect(a[0].asPw(), edges, mode, *ctx.random)));
    };
    registry.add(std::move(in));
  }
  {
    Intrinsic in = make("ca_step", 1, 2);
    in.result = [](Args a, const Records& records, std::string& why) -> std::optional<TypeDesc> {
      if (!isCaWorld(a[0], records) || (a.size() == 2 && !a[1].isNumeric())) {
        why = "expected (world[, alpha]) where world has phi: vector and particles: list of records with "
              "int members id, cell, v, species";
        return std::nullopt;
      }
      return a[0];
    };
    in.eval = [](std::span<const Value> a, std::span<const RealFn>, IntrinsicContext&) {
      const double alpha = a.size() == 2 ? a[1].toDouble() : 0.2;
      return caWorldToValue(caStep(caWorldFromValue(a[0]), alpha), a[0]);
    };
    registry.add(std::move(in));
  }
}

}  // namespace quantum

std::shared_ptr<const IntrinsicRegistry> defaultRegistry() {
  static const std::shared_ptr<const IntrinsicRegistry> registry = [] {
    auto r = std::make_shared<IntrinsicRegistry>();
    registerBuiltins(*r);
    quantum::registerQuantumIntrinsics(*r);
    return r;
  }();
  return registry;
}

}  // namespace causal
