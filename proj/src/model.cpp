#include "archopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "archopt/errors.hpp"

namespace archopt {

const Component* ArchitectureModel::find_component(std::string_view id) const {
    for (const auto& c : components)
        if (c.id == id) return &c;
    return nullptr;
}

const Node* ArchitectureModel::find_node(std::string_view id) const {
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

const CommLink* ArchitectureModel::find_link(std::string_view id) const {
    for (const auto& l : links)
        if (l.id == id) return &l;
    return nullptr;
}

const Scenario* ArchitectureModel::find_scenario(std::string_view id) const {
    for (const auto& s : scenarios)
        if (s.id == id) return &s;
    return nullptr;
}

const Operation* ArchitectureModel::find_operation(std::string_view id) const {
    for (const auto& c : components)
        for (const auto& op : c.operations)
            if (op.id == id) return &op;
    return nullptr;
}

const Component* ArchitectureModel::owner_of(std::string_view operation_id) const {
    for (const auto& c : components)
        for (const auto& op : c.operations)
            if (op.id == operation_id) return &c;
    return nullptr;
}

std::vector<const Node*> ArchitectureModel::nodes_of(std::string_view component_id) const {
    std::vector<const Node*> out;
    for (const auto& n : nodes)
        if (std::find(n.deployed.begin(), n.deployed.end(), component_id) != n.deployed.end())
            out.push_back(&n);
    return out;
}

const Node* ArchitectureModel::primary_node_of(std::string_view component_id) const {
    for (const auto& n : nodes)
        if (std::find(n.deployed.begin(), n.deployed.end(), component_id) != n.deployed.end())
            return &n;
    return nullptr;
}

const CommLink* ArchitectureModel::link_between(std::string_view a, std::string_view b) const {
    for (const auto& l : links) {
        if ((l.endpoints[0] == a && l.endpoints[1] == b) ||
            (l.endpoints[0] == b && l.endpoints[1] == a))
            return &l;
    }
    return nullptr;
}

bool ArchitectureModel::id_in_use(std::string_view id) const {
    if (find_component(id) || find_node(id) || find_link(id) || find_scenario(id) ||
        find_operation(id))
        return true;
    for (const auto& s : scenarios)
        for (const auto& m : s.messages)
            if (m.id == id) return true;
    return false;
}

namespace {

void check_unique(std::vector<std::string> ids, const char* rule,
                  std::vector<Violation>& out) {
    std::unordered_set<std::string> seen;
    for (auto& id : ids) {
        if (!seen.insert(id).second)
            out.push_back({id, rule, "duplicate identifier"});
    }
}

}  // namespace

ValidationReport validate(const ArchitectureModel& model) {
    ValidationReport report;
    auto& v = report.violations;

    std::vector<std::string> comp_ids, node_ids, link_ids, scen_ids, op_ids, msg_ids;
    for (const auto& c : model.components) {
        comp_ids.push_back(c.id);
        for (const auto& op : c.operations) op_ids.push_back(op.id);
    }
    for (const auto& n : model.nodes) node_ids.push_back(n.id);
    for (const auto& l : model.links) link_ids.push_back(l.id);
    for (const auto& s : model.scenarios) {
        scen_ids.push_back(s.id);
        for (const auto& m : s.messages) msg_ids.push_back(m.id);
    }
    check_unique(comp_ids, "duplicate-component-id", v);
    check_unique(node_ids, "duplicate-node-id", v);
    check_unique(link_ids, "duplicate-link-id", v);
    check_unique(scen_ids, "duplicate-scenario-id", v);
    check_unique(op_ids, "duplicate-operation-id", v);
    check_unique(msg_ids, "duplicate-message-id", v);

    for (const auto& c : model.components) {
        if (c.failure_prob < 0.0 || c.failure_prob > 1.0)
            v.push_back({c.id, "failure-prob-range", "component failure_prob must be in [0,1]"});
        for (const auto& op : c.operations) {
            if (op.owner != c.id)
                v.push_back({op.id, "operation-owner-mismatch",
                             "owner field '" + op.owner + "' does not match component '" + c.id + "'"});
        }
        if (model.nodes_of(c.id).empty())
            v.push_back({c.id, "undeployed-component", "component is deployed on no node"});
    }

    for (const auto& n : model.nodes) {
        if (!(n.speed_factor > 0.0))
            v.push_back({n.id, "speed-factor-positive", "speed_factor must be > 0"});
        for (const auto& cid : n.deployed)
            if (!model.find_component(cid))
                v.push_back({n.id, "dangling-deployment-ref", "deployed component '" + cid + "' does not exist"});
    }

    for (const auto& l : model.links) {
        if (l.endpoints[0] == l.endpoints[1])
            v.push_back({l.id, "link-endpoints-distinct", "endpoints must differ"});
        for (const auto& e : l.endpoints)
            if (!model.find_node(e))
                v.push_back({l.id, "dangling-link-endpoint", "node '" + e + "' does not exist"});
        if (l.failure_prob < 0.0 || l.failure_prob > 1.0)
            v.push_back({l.id, "failure-prob-range", "link failure_prob must be in [0,1]"});
    }

    double prob_sum = 0.0;
    for (const auto& s : model.scenarios) {
        prob_sum += s.probability;
        if (s.probability < 0.0 || s.probability > 1.0)
            v.push_back({s.id, "scenario-prob-range", "probability must be in [0,1]"});
        if (s.workload.population < 1)
            v.push_back({s.id, "workload-population-positive", "population must be >= 1"});
        if (s.workload.think_time_s < 0.0)
            v.push_back({s.id, "workload-think-nonneg", "think_time must be >= 0"});
        if (s.messages.empty()) {
            v.push_back({s.id, "empty-message-sequence", "scenario has no messages"});
        } else if (s.messages.front().sender != kActor) {
            v.push_back({s.messages.front().id, "first-message-not-actor",
                         "first message of scenario '" + s.id + "' must originate from " + std::string(kActor)});
        }
        for (const auto& m : s.messages) {
            if (!model.find_operation(m.receiver_op))
                v.push_back({m.id, "dangling-operation-ref", "operation '" + m.receiver_op + "' does not exist"});
            if (m.sender != kActor && !model.find_component(m.sender))
                v.push_back({m.id, "dangling-sender-ref", "sender '" + m.sender + "' does not exist"});
            if (m.exec_time_s < 0.0)
                v.push_back({m.id, "exec-time-nonneg", "exec_time must be >= 0"});
            if (m.repetitions < 1.0)
                v.push_back({m.id, "repetitions-min", "repetitions must be >= 1"});
            if (m.msg_size_kb < 0.0)
                v.push_back({m.id, "msg-size-nonneg", "msg_size must be >= 0"});
        }
    }
    if (!model.scenarios.empty() && std::abs(prob_sum - 1.0) > 1e-9)
        v.push_back({model.name, "scenario-prob-sum", "probabilities must sum to 1"});

    return report;
}

namespace {

enum class Category { Component, Node, Operation };

// Degree counts connections per the archDist weight model:
//   node:      incident links + deployed components
//   component: operations + messages sent/received over all scenarios + deployment edges
//   operation: messages targeting it + its owner edge
long degree_of(const ArchitectureModel& model, std::string_view id, Category cat) {
    long d = 0;
    switch (cat) {
        case Category::Node: {
            const Node* n = model.find_node(id);
            for (const auto& l : model.links)
                if (l.endpoints[0] == id || l.endpoints[1] == id) ++d;
            d += static_cast<long>(n->deployed.size());
            break;
        }
        case Category::Component: {
            const Component* c = model.find_component(id);
            d += static_cast<long>(c->operations.size());
            for (const auto& s : model.scenarios) {
                for (const auto& m : s.messages) {
                    if (m.sender == id) ++d;
                    const Component* recv = model.owner_of(m.receiver_op);
                    if (recv && recv->id == id) ++d;
                }
            }
            d += static_cast<long>(model.nodes_of(id).size());
            break;
        }
        case Category::Operation: {
            for (const auto& s : model.scenarios)
                for (const auto& m : s.messages)
                    if (m.receiver_op == id) ++d;
            d += 1;  // owner edge
            break;
        }
    }
    return d;
}

}  // namespace

double architectural_weight(const ArchitectureModel& model, std::string_view element_id) {
    Category cat;
    if (model.find_component(element_id))
        cat = Category::Component;
    else if (model.find_node(element_id))
        cat = Category::Node;
    else if (model.find_operation(element_id))
        cat = Category::Operation;
    else
        throw UnknownElement(std::string(element_id));

    long deg = degree_of(model, element_id, cat);
    long max_deg = 0;
    switch (cat) {
        case Category::Node:
            for (const auto& n : model.nodes)
                max_deg = std::max(max_deg, degree_of(model, n.id, cat));
            break;
        case Category::Component:
            for (const auto& c : model.components)
                max_deg = std::max(max_deg, degree_of(model, c.id, cat));
            break;
        case Category::Operation:
            for (const auto& c : model.components)
                for (const auto& op : c.operations)
                    max_deg = std::max(max_deg, degree_of(model, op.id, cat));
            break;
    }
    if (max_deg == 0) return 1.0;
    return 1.0 + static_cast<double>(deg) / static_cast<double>(max_deg);
}

std::vector<ResolvedHop> connections_of(const ArchitectureModel& model, const Scenario& scenario) {
    std::vector<ResolvedHop> hops;
    hops.reserve(scenario.messages.size());
    for (const auto& m : scenario.messages) {
        ResolvedHop hop;
        hop.message = &m;
        if (m.sender == kActor) {
            hops.push_back(hop);  // actor is not deployed, no link traversed
            continue;
        }
        const Component* recv = model.owner_of(m.receiver_op);
        if (!recv) throw UnknownElement(m.receiver_op);
        const Node* sn = model.primary_node_of(m.sender);
        const Node* rn = model.primary_node_of(recv->id);
        if (!sn) throw UnknownElement("deployment of " + m.sender);
        if (!rn) throw UnknownElement("deployment of " + recv->id);
        if (sn->id != rn->id) {
            hop.link = model.link_between(sn->id, rn->id);
            if (!hop.link)
                throw MissingLink("message '" + m.id + "': no link between nodes '" + sn->id +
                                  "' and '" + rn->id + "'");
        }
        hops.push_back(hop);
    }
    return hops;
}

CallForest scenario_call_forest(const ArchitectureModel& model, const Scenario& scenario) {
    CallForest forest;
    const int n = static_cast<int>(scenario.messages.size());
    forest.children.assign(n, {});
    forest.parent.assign(n, -1);

    // Stack of active receptions: message index whose receiver is executing.
    std::vector<int> stack;
    auto receiver_of = [&](int i) -> const Component* {
        return model.owner_of(scenario.messages[i].receiver_op);
    };

    for (int i = 0; i < n; ++i) {
        const Message& m = scenario.messages[i];
        if (m.sender == kActor) {
            stack.clear();  // control returned to the actor
            forest.roots.push_back(i);
        } else {
            // pop frames until the sender is the active receiver
            while (!stack.empty()) {
                const Component* active = receiver_of(stack.back());
                if (active && active->id == m.sender) break;
                stack.pop_back();
            }
            if (stack.empty())
                throw UnresolvableBehavior("scenario '" + scenario.id + "': message '" + m.id +
                                           "' sent by '" + m.sender +
                                           "' which is not on the call stack");
            forest.parent[i] = stack.back();
            forest.children[stack.back()].push_back(i);
        }
        stack.push_back(i);
    }
    return forest;
}

}  // namespace archopt
