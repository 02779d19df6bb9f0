#pragma once

#include <string>
#include <variant>
#include <vector>

#include "causal/core/state.hpp"
#include "causal/error.hpp"
#include "causal/engine/model.hpp"
#include "causal/engine/random.hpp"
#include "causal/engine/rng.hpp"

namespace causal {

enum class SelectionMode { Strict, FirstMatch };

std::string toString(SelectionMode mode);

struct NoApplicableLaw {
  SystemState witness;
};

struct MultipleApplicable {
  std::vector<std::string> laws;
  SystemState witness;
};

using Selection = std::variant<const Law*, NoApplicableLaw, MultipleApplicable>;

// Thrown by step() when law selection fails; carries the witness state.
class LawSelectionError : public Error {
 public:
  LawSelectionError(NoApplicableLaw gap);
  LawSelectionError(MultipleApplicable overlap);

  const SystemState& witness() const { return witness_; }
  const std::vector<std::string>& laws() const { return laws_; }

 private:
  SystemState witness_;
  std::vector<std::string> laws_;
};

bool evalGuard(const CausalModel& model, const Law& law, const SystemState& s, double dt);

Selection selectLaw(const CausalModel& model, const SystemState& s, SelectionMode mode, double dt);

// s1 = f(s0); the time coordinate is left at s0.time.
SystemState applyLaw(const CausalModel& model, const Law& law, const SystemState& s0, double dt,
                     RandomSource& random);
SystemState applyLaw(const CausalModel& model, const Law& law, const SystemState& s0, double dt, RngStream& rng);

// selectLaw, applyLaw, then time = s0.time + dt.
SystemState step(const CausalModel& model, const SystemState& s0, double dt, RandomSource& random,
                 SelectionMode mode = SelectionMode::Strict);
SystemState step(const CausalModel& model, const SystemState& s0, double dt, RngStream& rng,
                 SelectionMode mode = SelectionMode::Strict);

struct DeterminismVerdict {
  bool deterministic = true;
  std::vector<std::string> laws;  // laws that use randomness
};

DeterminismVerdict classifyDeterminism(const CausalModel& model);

// Initial state of a model: the preset state if there is one, otherwise the
// init block run against the zero state. Errors: MissingField for fields the
// init block leaves unassigned.
SystemState initialState(const CausalModel& model, RngStream& rng);

// Value of the halt predicate; false when the model has none.
bool evalHalt(const CausalModel& model, const SystemState& s, double dt);

}  // namespace causal
