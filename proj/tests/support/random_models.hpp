#pragma once

#include <string>
#include <vector>

#include "archopt/model.hpp"
#include "archopt/rng.hpp"

namespace archopt::testgen {

// Random annotated architecture for reliability checks: whole-KB message
// sizes and integer repetitions (so per-KB and per-invocation Monte-Carlo
// trials are exact), scenario probabilities summing to 1, full link mesh,
// call chains rooted at the actor.
inline ArchitectureModel random_reliability_model(std::uint64_t seed) {
    Rng rng(seed);
    ArchitectureModel m;
    m.name = "random_rel_" + std::to_string(seed);

    int nc = 2 + static_cast<int>(rng.index(4));  // 2..5 components
    for (int i = 0; i < nc; ++i) {
        Component c;
        c.id = "c" + std::to_string(i);
        c.operations.push_back(Operation{"op" + std::to_string(i), c.id});
        c.failure_prob = 0.04 * rng.real();
        m.components.push_back(std::move(c));
    }

    // one node per component, except ~30% ride along with the previous one
    for (int i = 0; i < nc; ++i) {
        if (i > 0 && rng.real() < 0.3) {
            m.nodes.back().deployed.push_back(m.components[i].id);
        } else {
            Node n;
            n.id = "n" + std::to_string(i);
            n.deployed.push_back(m.components[i].id);
            m.nodes.push_back(std::move(n));
        }
    }
    for (std::size_t a = 0; a < m.nodes.size(); ++a)
        for (std::size_t b = a + 1; b < m.nodes.size(); ++b) {
            CommLink l;
            l.id = "l" + std::to_string(a) + "_" + std::to_string(b);
            l.endpoints = {m.nodes[a].id, m.nodes[b].id};
            l.failure_prob = 0.015 * rng.real();
            m.links.push_back(std::move(l));
        }

    int ns = 1 + static_cast<int>(rng.index(3));  // 1..3 scenarios
    const std::vector<std::vector<double>> partitions = {
        {1.0}, {0.6, 0.4}, {0.5, 0.3, 0.2}};
    int mid = 0;
    for (int j = 0; j < ns; ++j) {
        Scenario sc;
        sc.id = "s" + std::to_string(j);
        sc.probability = partitions[ns - 1][j];
        sc.workload = ClosedWorkload{2, 1.0};
        int nm = 3 + static_cast<int>(rng.index(6));  // 3..8 messages
        std::string sender(kActor);
        for (int k = 0; k < nm; ++k) {
            int target = static_cast<int>(rng.index(nc));
            Message msg;
            msg.id = "m" + std::to_string(mid++);
            msg.sender = sender;
            msg.receiver_op = "op" + std::to_string(target);
            msg.exec_time_s = 0.05 + 0.2 * rng.real();
            msg.repetitions = 1.0 + static_cast<double>(rng.index(3));
            msg.msg_size_kb = static_cast<double>(rng.index(4));
            sc.messages.push_back(std::move(msg));
            // half the time keep nesting into the callee, otherwise restart
            // at the actor; both keep the sender on the reception stack
            sender = rng.real() < 0.5 ? m.components[target].id : std::string(kActor);
        }
        m.scenarios.push_back(std::move(sc));
    }
    return m;
}

}  // namespace archopt::testgen
