#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "archopt/errors.hpp"
#include "archopt/lqn.hpp"

namespace archopt {
namespace {

// Nodes with identical deployment sets are replicas of one another and fold
// into a single multi-server processor, named after the smallest member id.
struct NodeGroup {
  std::string rep;
  std::vector<const Node*> members;
};

std::vector<NodeGroup> group_nodes(const ArchitectureModel& model) {
  std::map<std::vector<std::string>, NodeGroup> by_set;
  std::vector<std::vector<std::string>> order;
  for (const Node& n : model.nodes) {
    std::vector<std::string> key = n.deployed;
    std::sort(key.begin(), key.end());
    auto [it, fresh] = by_set.try_emplace(key);
    if (fresh) order.push_back(key);
    it->second.members.push_back(&n);
    if (it->second.rep.empty() || n.id < it->second.rep) it->second.rep = n.id;
  }
  std::vector<NodeGroup> groups;
  for (const auto& key : order) groups.push_back(by_set[key]);
  return groups;
}

std::set<std::string> interacting_components(const ArchitectureModel& model) {
  std::set<std::string> out;
  for (const Scenario& s : model.scenarios) {
    for (const Message& m : s.messages) {
      if (const Component* recv = model.owner_of(m.receiver_op)) out.insert(recv->id);
      if (m.sender != kActor) out.insert(m.sender);
    }
  }
  return out;
}

std::string group_rep_of_node(const std::vector<NodeGroup>& groups, const std::string& node_id) {
  for (const NodeGroup& g : groups)
    for (const Node* n : g.members)
      if (n->id == node_id) return g.rep;
  return {};
}

}  // namespace

std::string hosting_processor(const ArchitectureModel& model, std::string_view component_id) {
  const Node* primary = model.primary_node_of(component_id);
  if (!primary) throw UnknownElement("deployment of " + std::string(component_id));
  return group_rep_of_node(group_nodes(model), primary->id);
}

LqnModel transform(const ArchitectureModel& model) {
  LqnModel lqn;
  const std::set<std::string> interacting = interacting_components(model);
  const std::vector<NodeGroup> groups = group_nodes(model);

  std::set<std::string> used_processors;
  for (const std::string& cid : interacting) {
    const Node* primary = model.primary_node_of(cid);
    if (primary) used_processors.insert(group_rep_of_node(groups, primary->id));
  }
  for (const NodeGroup& g : groups) {
    if (!used_processors.count(g.rep)) continue;
    Processor p;
    p.id = g.rep;
    p.multiplicity = static_cast<int>(g.members.size());
    p.speed_factor = model.find_node(g.rep)->speed_factor;
    lqn.processors.push_back(p);
  }

  for (const Component& c : model.components) {
    if (!interacting.count(c.id)) continue;
    LqnTask t;
    t.id = c.id;
    t.processor = group_rep_of_node(groups, model.primary_node_of(c.id)->id);
    t.multiplicity = static_cast<int>(model.nodes_of(c.id).size());
    t.kind = TaskKind::Server;
    lqn.tasks.push_back(t);
  }

  auto demand_of = [&](const Message& m) {
    const Component* owner = model.owner_of(m.receiver_op);
    const Node* host = model.primary_node_of(owner->id);
    return m.exec_time_s / host->speed_factor;
  };

  for (const Scenario& s : model.scenarios) {
    CallForest forest = scenario_call_forest(model, s);

    std::string ref_id = "ref_" + s.id;
    while (model.id_in_use(ref_id)) ref_id += "_";
    LqnTask ref;
    ref.id = ref_id;
    ref.multiplicity = s.workload.population;
    ref.kind = TaskKind::Reference;
    ref.think_time_s = s.workload.think_time_s;
    ref.scenario = s.id;
    lqn.tasks.push_back(ref);
    lqn.entries.push_back(Entry{"e_" + ref_id, ref_id});
    lqn.activities.push_back(Activity{"a_" + ref_id, "e_" + ref_id, 0.0, {}});
    const std::size_t ref_activity = lqn.activities.size() - 1;

    // Depth-first emission. A message received by the component already
    // executing the parent frame is an in-process call: it folds into the
    // parent activity as extra demand instead of becoming a task-level call.
    auto emit = [&](auto&& self, int idx, std::size_t parent_activity,
                    const std::string& parent_task, double multiplier) -> void {
      const Message& m = s.messages[idx];
      const Component* owner = model.owner_of(m.receiver_op);
      if (m.sender != kActor && owner->id == parent_task) {
        lqn.activities[parent_activity].host_demand += multiplier * m.repetitions * demand_of(m);
        for (int child : forest.children[idx])
          self(self, child, parent_activity, parent_task, multiplier * m.repetitions);
        return;
      }
      lqn.entries.push_back(Entry{"e_" + m.id, owner->id});
      lqn.activities.push_back(Activity{"a_" + m.id, "e_" + m.id, demand_of(m), {}});
      const std::size_t own = lqn.activities.size() - 1;
      lqn.activities[parent_activity].calls.push_back(
          SynchCall{"e_" + m.id, multiplier * m.repetitions});
      for (int child : forest.children[idx]) self(self, child, own, owner->id, 1.0);
    };
    for (int root : forest.roots) emit(emit, root, ref_activity, ref_id, 1.0);
  }
  return lqn;
}

std::string dump_lqn(const LqnModel& lqn) {
  std::ostringstream out;
  auto print_task = [&](const LqnTask& t, const char* indent) {
    out << indent << "task " << t.id << " mult=" << t.multiplicity;
    if (t.kind == TaskKind::Reference)
      out << " reference think=" << t.think_time_s
          << (t.scenario.empty() ? "" : " scenario=" + t.scenario);
    out << "\n";
    for (const Entry& e : lqn.entries) {
      if (e.task != t.id) continue;
      out << indent << "  entry " << e.id << "\n";
      for (const Activity& a : lqn.activities) {
        if (a.entry != e.id) continue;
        out << indent << "    activity " << a.id << " demand=" << a.host_demand << "\n";
        for (const SynchCall& c : a.calls)
          out << indent << "      call " << c.target_entry << " mean=" << c.mean_calls << "\n";
      }
    }
  };
  for (const LqnTask& t : lqn.tasks)
    if (t.processor.empty()) print_task(t, "");
  for (const Processor& p : lqn.processors) {
    out << "processor " << p.id << " mult=" << p.multiplicity << " speed=" << p.speed_factor
        << "\n";
    for (const LqnTask& t : lqn.tasks)
      if (t.processor == p.id) print_task(t, "  ");
  }
  return out.str();
}

}  // namespace archopt
