#include "causal/interp/branch.hpp"

#include <algorithm>
#include <deque>

#include "causal/engine/evaluator.hpp"

namespace causal::interp {

namespace {

// Thrown when a lineage reaches a draw it has no prescribed outcome for.
struct BranchPoint {
  std::vector<double> probabilities;
  std::vector<Value> values;
};

class PrescribedRandomSource final : public RandomSource {
 public:
  explicit PrescribedRandomSource(const std::vector<std::size_t>& choices) : choices_(choices) {}

  Value draw(const RandomSpec& spec) override {
    if (!spec.categorical()) {
      throw Error(ErrorKind::ContinuousRandomNotBranchable, "continuous random draws cannot be branched");
    }
    auto probs = categoricalProbabilities(spec);
    if (used_ < choices_.size()) return spec.values.at(choices_[used_++]);
    throw BranchPoint{std::move(probs), spec.values};
  }

 private:
  const std::vector<std::size_t>& choices_;
  std::size_t used_ = 0;
};

struct Lineage {
  std::size_t node;
  SystemState state;  // state at the start of the pending step
  std::size_t step;
  std::vector<std::size_t> choices;  // outcomes fixed inside the pending step
};

}  // namespace

std::vector<std::size_t> WorldTree::leaves() const {
  std::vector<std::size_t> out;
  for (const auto& n : nodes) {
    if (n.children.empty() && !(n.termination && n.termination->kind == Termination::Pruned)) out.push_back(n.id);
  }
  return out;
}

double WorldTree::leafWeight() const {
  double s = 0.0;
  for (auto id : leaves()) s += nodes[id].weight;
  return s;
}

WorldTree branchRun(const CausalModel& model, const SystemState& init, const RunConfig& cfg, std::size_t depthBound,
                    std::size_t widthBound) {
  cfg.validate();
  if (depthBound < 1 || widthBound < 1) {
    throw Error(ErrorKind::InvalidArgument, "depth and width bounds must be at least 1");
  }
  if (!init.schema()->sameLayout(*model.schema)) {
    throw Error(ErrorKind::SchemaMismatch, "initial state does not match model '" + model.name + "'", model.name);
  }
  WorldTree tree;
  tree.depthBound = depthBound;
  tree.widthBound = widthBound;
  tree.nodes.push_back(WorldNode{0, std::nullopt, "", 0, 1.0, 1.0, 0, 0, "", init, {}, std::nullopt});

  const double t0 = init.time();
  std::deque<Lineage> live;
  live.push_back({0, init, 0, {}});

  auto finish = [&](std::size_t node, const SystemState& s, std::size_t k, TerminationReason reason) {
    tree.nodes[node].state = s;
    tree.nodes[node].step = k;
    tree.nodes[node].termination = std::move(reason);
  };

  while (!live.empty()) {
    std::vector<Lineage> born;
    while (!live.empty()) {
      Lineage lin = std::move(live.front());
      live.pop_front();
      while (true) {
        const SystemState& s = lin.state;
        try {
          if (lin.choices.empty()) {
            if (evalHalt(model, s, cfg.dt)) {
              finish(lin.node, s, lin.step, {Termination::Halted, "halt condition holds", std::nullopt, {}});
              break;
            }
            if (lin.step == cfg.maxSteps) {
              finish(lin.node, s, lin.step, {Termination::MaxSteps, "step bound reached", std::nullopt, {}});
              break;
            }
          }
        } catch (const Error& err) {
          finish(lin.node, s, lin.step,
                 {Termination::EvalError, std::string(toString(err.kind())) + ": " + err.what(), s, {}});
          break;
        }
        const Law* law = nullptr;
        try {
          Selection sel = selectLaw(model, s, cfg.mode, cfg.dt);
          if (auto* gap = std::get_if<NoApplicableLaw>(&sel)) throw LawSelectionError(std::move(*gap));
          if (auto* overlap = std::get_if<MultipleApplicable>(&sel)) throw LawSelectionError(std::move(*overlap));
          law = std::get<const Law*>(sel);
          PrescribedRandomSource source(lin.choices);
          SystemState next = applyLaw(model, *law, s, cfg.dt, source);
          next.setTime(t0 + static_cast<double>(lin.step + 1) * cfg.dt);
          lin.state = std::move(next);
          lin.step += 1;
          lin.choices.clear();
        } catch (const BranchPoint& fork) {
          WorldNode& parent = tree.nodes[lin.node];
          parent.state = s;
          parent.step = lin.step;
          parent.law = law ? law->name : "";
          if (parent.draws >= depthBound) {
            parent.termination = TerminationReason{Termination::DepthBound,
                                                   "lineage reached the bound of " + std::to_string(depthBound) +
                                                       " random draws",
                                                   std::nullopt,
                                                   {}};
            break;
          }
          const double parentWeight = parent.weight;
          const std::size_t draws = parent.draws + 1;
          for (std::size_t i = 0; i < fork.values.size(); ++i) {
            if (!(fork.probabilities[i] > 0.0)) continue;
            WorldNode child{0, std::nullopt, "", 0, 1.0, 1.0, 0, 0, "", s, {}, std::nullopt};
            child.id = tree.nodes.size();
            child.parent = lin.node;
            child.outcome = render(fork.values[i]);
            child.outcomeIndex = i;
            child.probability = fork.probabilities[i];
            child.weight = parentWeight * fork.probabilities[i];
            child.draws = draws;
            child.step = lin.step;
            child.state = s;
            tree.nodes[lin.node].children.push_back(child.id);
            Lineage next{child.id, s, lin.step, lin.choices};
            next.choices.push_back(i);
            tree.nodes.push_back(std::move(child));
            born.push_back(std::move(next));
          }
          break;
        } catch (const LawSelectionError& err) {
          const bool gap = err.kind() == ErrorKind::NoApplicableLaw;
          finish(lin.node, s, lin.step,
                 {gap ? Termination::NoApplicableLaw : Termination::MultipleApplicable, err.what(), err.witness(),
                  err.laws()});
          break;
        } catch (const Error& err) {
          if (err.kind() == ErrorKind::ContinuousRandomNotBranchable) {
            const std::string name = law ? law->name : "";
            throw Error(ErrorKind::ContinuousRandomNotBranchable,
                        "law '" + name + "' draws from a continuous range, which cannot be branched", name);
          }
          finish(lin.node, s, lin.step,
                 {Termination::EvalError, std::string(toString(err.kind())) + ": " + err.what(), s, {}});
          break;
        }
      }
    }
    if (born.size() > widthBound) {
      std::stable_sort(born.begin(), born.end(), [&](const Lineage& a, const Lineage& b) {
        return tree.nodes[a.node].weight > tree.nodes[b.node].weight;
      });
      for (std::size_t i = widthBound; i < born.size(); ++i) {
        WorldNode& n = tree.nodes[born[i].node];
        n.termination = TerminationReason{Termination::Pruned, "pruned by the width bound", std::nullopt, {}};
        tree.prunedMass += n.weight;
      }
      born.erase(born.begin() + static_cast<std::ptrdiff_t>(widthBound), born.end());
      std::stable_sort(born.begin(), born.end(),
                       [](const Lineage& a, const Lineage& b) { return a.node < b.node; });
    }
    for (auto& b : born) live.push_back(std::move(b));
  }
  return tree;
}

namespace {

Json nodeJson(const WorldTree& tree, std::size_t id, bool includeStates) {
  const WorldNode& n = tree.nodes[id];
  Json j;
  j["id"] = n.id;
  if (n.parent) {
    j["outcome"] = n.outcome;
    j["outcomeIndex"] = n.outcomeIndex;
    j["probability"] = n.probability;
  }
  j["weight"] = n.weight;
  j["step"] = n.step;
  if (!n.law.empty()) j["forkLaw"] = n.law;
  if (includeStates) j["state"] = causal::toJson(n.state);
  if (n.termination) j["terminationReason"] = toJson(*n.termination);
  Json children = Json::array();
  for (auto c : n.children) children.push_back(nodeJson(tree, c, includeStates));
  j["children"] = std::move(children);
  return j;
}

}  // namespace

Json toJson(const WorldTree& tree, bool includeStates) {
  Json j;
  j["depthBound"] = tree.depthBound;
  j["widthBound"] = tree.widthBound;
  j["leafCount"] = tree.leaves().size();
  j["leafWeight"] = tree.leafWeight();
  j["prunedMass"] = tree.prunedMass;
  j["root"] = nodeJson(tree, 0, includeStates);
  return j;
}

}  // namespace causal::interp
