#include "archopt/refactoring.hpp"

#include <algorithm>
#include <fstream>

#include "archopt/errors.hpp"

namespace archopt {

double default_brf(ActionKind kind) {
  switch (kind) {
    case ActionKind::CloneNode: return 1.23;
    case ActionKind::MoveOpNewCompNewNode: return 1.80;
    case ActionKind::MoveOpToComp: return 1.64;
    case ActionKind::DeployCompNewNode: return 1.45;
  }
  return 1.0;
}

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::CloneNode: return "CloneNode";
    case ActionKind::MoveOpNewCompNewNode: return "MoveOpNewCompNewNode";
    case ActionKind::MoveOpToComp: return "MoveOpToComp";
    case ActionKind::DeployCompNewNode: return "DeployCompNewNode";
  }
  return "?";
}

ActionKind kind_from_string(std::string_view name) {
  if (name == "CloneNode") return ActionKind::CloneNode;
  if (name == "MoveOpNewCompNewNode") return ActionKind::MoveOpNewCompNewNode;
  if (name == "MoveOpToComp") return ActionKind::MoveOpToComp;
  if (name == "DeployCompNewNode") return ActionKind::DeployCompNewNode;
  throw ParseError("unknown refactoring action kind: " + std::string(name));
}

RefactoringAction make_action(ActionKind kind, std::string target,
                              std::optional<std::string> aux) {
  RefactoringAction a;
  a.kind = kind;
  a.target = std::move(target);
  a.aux_target = std::move(aux);
  a.brf = default_brf(kind);
  return a;
}

bool precondition(const RefactoringAction& action, const ArchitectureModel& model) {
  switch (action.kind) {
    case ActionKind::CloneNode:
      return model.find_node(action.target) != nullptr;
    case ActionKind::MoveOpNewCompNewNode:
      return model.find_operation(action.target) != nullptr;
    case ActionKind::MoveOpToComp: {
      if (!action.aux_target) return false;
      const Component* owner = model.owner_of(action.target);
      const Component* dest = model.find_component(*action.aux_target);
      return owner && dest && owner->id != dest->id;
    }
    case ActionKind::DeployCompNewNode:
      return model.find_component(action.target) != nullptr;
  }
  return false;
}

namespace {

std::string fresh_id(const ArchitectureModel& model, const std::string& base) {
  for (int k = 1;; ++k) {
    std::string id = base + std::to_string(k);
    if (!model.id_in_use(id)) return id;
  }
}

// Messages issued while `op_id`'s reception is the active frame must follow
// the operation to its new owner, otherwise the sequences stop nesting.
void rehome_senders(ArchitectureModel& out, const ArchitectureModel& pre,
                    const std::string& op_id, const std::string& new_owner) {
  for (std::size_t si = 0; si < pre.scenarios.size(); ++si) {
    CallForest forest = scenario_call_forest(pre, pre.scenarios[si]);
    for (std::size_t mi = 0; mi < pre.scenarios[si].messages.size(); ++mi) {
      int p = forest.parent[mi];
      if (p >= 0 && pre.scenarios[si].messages[p].receiver_op == op_id)
        out.scenarios[si].messages[mi].sender = new_owner;
    }
  }
}

void erase_operation(Component& comp, const std::string& op_id) {
  comp.operations.erase(
      std::remove_if(comp.operations.begin(), comp.operations.end(),
                     [&](const Operation& op) { return op.id == op_id; }),
      comp.operations.end());
}

ArchitectureModel apply_clone_node(const RefactoringAction& action,
                                   const ArchitectureModel& model) {
  ArchitectureModel out = model;
  const Node* n = model.find_node(action.target);
  Node clone;
  clone.id = fresh_id(out, n->id + "_clone");
  clone.speed_factor = n->speed_factor;
  clone.deployed = n->deployed;  // co-deployment: the replica serves the same components
  out.nodes.push_back(clone);
  for (const CommLink& l : model.links) {
    if (l.endpoints[0] != n->id && l.endpoints[1] != n->id) continue;
    const std::string& peer = l.endpoints[0] == n->id ? l.endpoints[1] : l.endpoints[0];
    CommLink copy;
    copy.id = fresh_id(out, l.id + "_clone");
    copy.endpoints = {clone.id, peer};
    copy.failure_prob = l.failure_prob;
    out.links.push_back(copy);
  }
  return out;
}

ArchitectureModel apply_move_op_new(const RefactoringAction& action,
                                    const ArchitectureModel& model) {
  ArchitectureModel out = model;
  const Component* owner = model.owner_of(action.target);
  const Node* host = model.primary_node_of(owner->id);

  Component fresh_comp;
  fresh_comp.id = fresh_id(out, action.target + "_comp");
  fresh_comp.failure_prob = owner->failure_prob;  // the code moves with its defects
  fresh_comp.operations = {Operation{action.target, fresh_comp.id}};
  out.components.push_back(fresh_comp);
  erase_operation(*std::find_if(out.components.begin(), out.components.end(),
                                [&](const Component& c) { return c.id == owner->id; }),
                  action.target);

  Node fresh_node;
  fresh_node.id = fresh_id(out, action.target + "_node");
  fresh_node.speed_factor = host->speed_factor;
  fresh_node.deployed = {fresh_comp.id};
  out.nodes.push_back(fresh_node);

  // Mirror the old host's connectivity, plus a dedicated link back to it so
  // the remaining owner can still reach the extracted operation.
  for (const CommLink& l : model.links) {
    if (l.endpoints[0] != host->id && l.endpoints[1] != host->id) continue;
    const std::string& peer = l.endpoints[0] == host->id ? l.endpoints[1] : l.endpoints[0];
    CommLink copy;
    copy.id = fresh_id(out, l.id + "_copy");
    copy.endpoints = {fresh_node.id, peer};
    copy.failure_prob = l.failure_prob;
    out.links.push_back(copy);
  }
  CommLink back;
  back.id = fresh_id(out, fresh_node.id + "_link");
  back.endpoints = {fresh_node.id, host->id};
  back.failure_prob = 0.0;
  out.links.push_back(back);

  rehome_senders(out, model, action.target, fresh_comp.id);
  return out;
}

ArchitectureModel apply_move_op(const RefactoringAction& action,
                                const ArchitectureModel& model) {
  ArchitectureModel out = model;
  const Component* owner = model.owner_of(action.target);
  erase_operation(*std::find_if(out.components.begin(), out.components.end(),
                                [&](const Component& c) { return c.id == owner->id; }),
                  action.target);
  std::find_if(out.components.begin(), out.components.end(),
               [&](const Component& c) { return c.id == *action.aux_target; })
      ->operations.push_back(Operation{action.target, *action.aux_target});
  rehome_senders(out, model, action.target, *action.aux_target);
  return out;
}

ArchitectureModel apply_deploy_new(const RefactoringAction& action,
                                   const ArchitectureModel& model) {
  ArchitectureModel out = model;
  const Node* old_host = model.primary_node_of(action.target);

  for (Node& n : out.nodes)
    n.deployed.erase(std::remove(n.deployed.begin(), n.deployed.end(), action.target),
                     n.deployed.end());

  Node fresh_node;
  fresh_node.id = fresh_id(out, action.target + "_node");
  fresh_node.speed_factor = old_host->speed_factor;
  fresh_node.deployed = {action.target};
  out.nodes.push_back(fresh_node);

  // connected to every node the old host was directly connected to
  for (const CommLink& l : model.links) {
    if (l.endpoints[0] != old_host->id && l.endpoints[1] != old_host->id) continue;
    const std::string& peer =
        l.endpoints[0] == old_host->id ? l.endpoints[1] : l.endpoints[0];
    CommLink copy;
    copy.id = fresh_id(out, l.id + "_copy");
    copy.endpoints = {fresh_node.id, peer};
    copy.failure_prob = l.failure_prob;
    out.links.push_back(copy);
  }
  return out;
}

}  // namespace

ArchitectureModel apply(const RefactoringAction& action, const ArchitectureModel& model) {
  if (!precondition(action, model))
    throw PreconditionViolated(std::string(to_string(action.kind)) + " on '" + action.target +
                               "': precondition does not hold");
  switch (action.kind) {
    case ActionKind::CloneNode: return apply_clone_node(action, model);
    case ActionKind::MoveOpNewCompNewNode: return apply_move_op_new(action, model);
    case ActionKind::MoveOpToComp: return apply_move_op(action, model);
    case ActionKind::DeployCompNewNode: return apply_deploy_new(action, model);
  }
  throw PreconditionViolated("unknown action kind");
}

bool feasible(const RefactoringSequence& sequence, const ArchitectureModel& model) {
  ArchitectureModel cur = model;
  for (const RefactoringAction& a : sequence) {
    if (!precondition(a, cur)) return false;
    cur = apply(a, cur);
  }
  return true;
}

ArchitectureModel apply_sequence(const RefactoringSequence& sequence,
                                 const ArchitectureModel& model) {
  ArchitectureModel cur = model;
  for (const RefactoringAction& a : sequence) cur = apply(a, cur);
  return cur;
}

double arch_dist(const RefactoringSequence& sequence, const ArchitectureModel& initial_model) {
  double sum = 0.0;
  for (const RefactoringAction& a : sequence)
    sum += a.brf * architectural_weight(initial_model, a.target);
  return sum;
}

double arch_dist(const std::vector<std::pair<double, double>>& brf_aw_terms) {
  double sum = 0.0;
  for (const auto& [brf, aw] : brf_aw_terms) sum += brf * aw;
  return sum;
}

RefactoringAction random_action(const ArchitectureModel& model, Rng& rng) {
  std::vector<const Operation*> ops;
  for (const Component& c : model.components)
    for (const Operation& op : c.operations) ops.push_back(&op);

  constexpr ActionKind kinds[] = {ActionKind::CloneNode, ActionKind::MoveOpNewCompNewNode,
                                  ActionKind::MoveOpToComp, ActionKind::DeployCompNewNode};
  for (int attempt = 0; attempt < 100; ++attempt) {
    ActionKind kind = kinds[rng.index(4)];
    RefactoringAction a;
    switch (kind) {
      case ActionKind::CloneNode:
        if (model.nodes.empty()) continue;
        a = make_action(kind, model.nodes[rng.index(model.nodes.size())].id);
        break;
      case ActionKind::MoveOpNewCompNewNode:
        if (ops.empty()) continue;
        a = make_action(kind, ops[rng.index(ops.size())]->id);
        break;
      case ActionKind::MoveOpToComp: {
        if (ops.empty() || model.components.size() < 2) continue;
        const Operation* op = ops[rng.index(ops.size())];
        std::vector<const Component*> dests;
        for (const Component& c : model.components)
          if (c.id != op->owner) dests.push_back(&c);
        if (dests.empty()) continue;
        a = make_action(kind, op->id, dests[rng.index(dests.size())]->id);
        break;
      }
      case ActionKind::DeployCompNewNode:
        if (model.components.empty()) continue;
        a = make_action(kind, model.components[rng.index(model.components.size())].id);
        break;
    }
    if (precondition(a, model)) return a;
  }
  throw NoEligibleTarget("no eligible refactoring target after 100 attempts");
}

nlohmann::ordered_json sequence_to_json(const RefactoringSequence& sequence) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const RefactoringAction& a : sequence) {
    nlohmann::ordered_json ja;
    ja["kind"] = std::string(to_string(a.kind));
    ja["target"] = a.target;
    if (a.aux_target) ja["aux_target"] = *a.aux_target;
    doc.push_back(std::move(ja));
  }
  return doc;
}

RefactoringSequence sequence_from_json(const nlohmann::ordered_json& doc) {
  if (!doc.is_array()) throw ParseError("sequence: expected an array of actions");
  RefactoringSequence seq;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& ja = doc[i];
    std::string where = "sequence[" + std::to_string(i) + "]";
    if (!ja.is_object()) throw ParseError(where + ": expected an object");
    auto kind_it = ja.find("kind");
    auto target_it = ja.find("target");
    if (kind_it == ja.end() || !kind_it->is_string())
      throw ParseError(where + ": missing string \"kind\"");
    if (target_it == ja.end() || !target_it->is_string())
      throw ParseError(where + ": missing string \"target\"");
    std::optional<std::string> aux;
    if (auto it = ja.find("aux_target"); it != ja.end()) {
      if (!it->is_string()) throw ParseError(where + ": \"aux_target\" must be a string");
      aux = it->get<std::string>();
    }
    for (const auto& item : ja.items())
      if (item.key() != "kind" && item.key() != "target" && item.key() != "aux_target")
        throw ParseError(where + ": unknown key \"" + item.key() + "\"");
    seq.push_back(make_action(kind_from_string(kind_it->get<std::string>()),
                              target_it->get<std::string>(), std::move(aux)));
  }
  return seq;
}

RefactoringSequence load_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sequence file: " + path);
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return sequence_from_json(doc);
}

}  // namespace archopt
