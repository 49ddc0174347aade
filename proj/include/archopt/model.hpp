#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace archopt {

// Sentinel sender id for the actor that triggers a scenario.
inline constexpr std::string_view kActor = "$actor";

struct Operation {
    std::string id;
    std::string owner;  // id of the owning component, kept in sync by the loader
};

struct Component {
    std::string id;
    std::vector<Operation> operations;
    double failure_prob = 0.0;
};

struct Node {
    std::string id;
    double speed_factor = 1.0;  // service-rate multiplier, > 0
    std::vector<std::string> deployed;  // component ids
};

struct CommLink {
    std::string id;
    std::array<std::string, 2> endpoints;  // node ids, unordered pair
    double failure_prob = 0.0;
};

struct ClosedWorkload {
    int population = 1;
    double think_time_s = 0.0;
};

struct Message {
    std::string id;
    std::string sender;       // component id or kActor
    std::string receiver_op;  // operation id
    double exec_time_s = 0.0; // service demand at the receiver
    double repetitions = 1.0;
    double msg_size_kb = 0.0;
    std::optional<std::string> data_format;
};

struct Scenario {
    std::string id;
    double probability = 1.0;
    ClosedWorkload workload;
    std::vector<Message> messages;  // ordered
};

// Immutable after load; refactoring actions return fresh copies.
struct ArchitectureModel {
    std::string name;
    std::vector<Component> components;
    std::vector<Node> nodes;
    std::vector<CommLink> links;
    std::vector<Scenario> scenarios;

    const Component* find_component(std::string_view id) const;
    const Node* find_node(std::string_view id) const;
    const CommLink* find_link(std::string_view id) const;
    const Scenario* find_scenario(std::string_view id) const;
    const Operation* find_operation(std::string_view id) const;

    // Component owning the given operation, or nullptr.
    const Component* owner_of(std::string_view operation_id) const;

    // All nodes deploying the component, in model node order.
    std::vector<const Node*> nodes_of(std::string_view component_id) const;

    // First node in model order deploying the component, or nullptr.
    // Replicated components route messages through their primary node.
    const Node* primary_node_of(std::string_view component_id) const;

    // Link whose endpoints are {a, b}, or nullptr.
    const CommLink* link_between(std::string_view a, std::string_view b) const;

    bool id_in_use(std::string_view id) const;
};

struct Violation {
    std::string element;
    std::string rule;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Pure structural + semantic check; violations are data, not failures.
ValidationReport validate(const ArchitectureModel& model);

// Connectivity weight in [1, 2]: 1 + degree / max_degree over the element's
// category. Throws UnknownElement.
double architectural_weight(const ArchitectureModel& model, std::string_view element_id);

// Per-message resolved link for a scenario. link == nullptr when the message
// is co-located or sent by the actor. Throws MissingLink when sender and
// receiver sit on unconnected nodes.
struct ResolvedHop {
    const Message* message = nullptr;
    const CommLink* link = nullptr;
};
std::vector<ResolvedHop> connections_of(const ArchitectureModel& model, const Scenario& scenario);

// Call forest of a scenario reconstructed from sender/receiver order.
// children[i] lists message indices called while message i's reception is the
// active frame; roots are messages sent by the actor. Throws
// UnresolvableBehavior when a sender is not on the reception stack.
struct CallForest {
    std::vector<int> roots;
    std::vector<std::vector<int>> children;  // indexed by message position
    std::vector<int> parent;                 // -1 for roots
};
CallForest scenario_call_forest(const ArchitectureModel& model, const Scenario& scenario);

}  // namespace archopt
