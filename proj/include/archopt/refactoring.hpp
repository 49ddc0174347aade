#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "archopt/model.hpp"
#include "archopt/rng.hpp"

namespace archopt {

enum class ActionKind {
  CloneNode,            // replicate a node with its deployments and links
  MoveOpNewCompNewNode, // extract an operation into a fresh component on a fresh node
  MoveOpToComp,         // rehome an operation into an existing component
  DeployCompNewNode,    // redeploy a component onto a fresh node
};

// Fixed effort weight of each action kind.
double default_brf(ActionKind kind);

std::string_view to_string(ActionKind kind);
ActionKind kind_from_string(std::string_view name);  // throws ParseError

struct RefactoringAction {
  ActionKind kind = ActionKind::CloneNode;
  std::string target;                     // node / operation / component id, per kind
  std::optional<std::string> aux_target;  // destination component for MoveOpToComp
  double brf = 1.0;
};

RefactoringAction make_action(ActionKind kind, std::string target,
                              std::optional<std::string> aux = std::nullopt);

using RefactoringSequence = std::vector<RefactoringAction>;

// False when the target category is wrong or the action is a no-op move.
bool precondition(const RefactoringAction& action, const ArchitectureModel& model);

// Returns a new model; the input is untouched. Throws PreconditionViolated.
ArchitectureModel apply(const RefactoringAction& action, const ArchitectureModel& model);

// Left fold of precondition + apply over the sequence.
bool feasible(const RefactoringSequence& sequence, const ArchitectureModel& model);

// Fold-apply every action. Throws PreconditionViolated on the first bad step.
ArchitectureModel apply_sequence(const RefactoringSequence& sequence,
                                 const ArchitectureModel& model);

// Sum of brf * architectural_weight(initial_model, target). Weights are always
// priced against the initial model, so targets must exist there.
double arch_dist(const RefactoringSequence& sequence, const ArchitectureModel& initial_model);

// Same sum over explicit (brf, weight) terms.
double arch_dist(const std::vector<std::pair<double, double>>& brf_aw_terms);

// Uniform kind, uniform eligible target, precondition guaranteed. Kinds with
// no eligible target on this model are simply never produced. Throws
// NoEligibleTarget after 100 attempts.
RefactoringAction random_action(const ArchitectureModel& model, Rng& rng);

nlohmann::ordered_json sequence_to_json(const RefactoringSequence& sequence);
RefactoringSequence sequence_from_json(const nlohmann::ordered_json& doc);  // throws ParseError
RefactoringSequence load_sequence(const std::string& path);

}  // namespace archopt
