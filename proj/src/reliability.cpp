#include "archopt/reliability.hpp"

#include <cmath>

namespace archopt {

std::map<std::string, int> inv_counts(const ArchitectureModel& model,
                                      const Scenario& scenario) {
    std::map<std::string, int> counts;
    for (const Component& c : model.components) counts[c.id] = 0;
    for (const Message& msg : scenario.messages) {
        const Component* owner = model.owner_of(msg.receiver_op);
        if (owner == nullptr) continue;
        counts[owner->id] += static_cast<int>(std::lround(msg.repetitions));
    }
    return counts;
}

std::map<std::string, double> msg_sizes(const ArchitectureModel& model,
                                        const Scenario& scenario) {
    std::map<std::string, double> totals;
    for (const CommLink& l : model.links) totals[l.id] = 0.0;
    for (const ResolvedHop& hop : connections_of(model, scenario)) {
        if (hop.link == nullptr) continue;  // co-located or actor-sent
        totals[hop.link->id] += hop.message->msg_size_kb * hop.message->repetitions;
    }
    return totals;
}

ReliabilityReport evaluate_reliability(const ArchitectureModel& model) {
    const std::size_t nc = model.components.size();
    const std::size_t nl = model.links.size();
    const std::size_t ns = model.scenarios.size();

    ReliabilityReport report;
    report.inv_counts.assign(nc, std::vector<int>(ns, 0));
    report.msg_sizes.assign(nl, std::vector<double>(ns, 0.0));
    report.scenario_factors.assign(ns, 1.0);

    double weighted_survival = 0.0;
    for (std::size_t j = 0; j < ns; ++j) {
        const Scenario& scenario = model.scenarios[j];
        std::map<std::string, int> inv = inv_counts(model, scenario);
        std::map<std::string, double> kb = msg_sizes(model, scenario);

        double factor = 1.0;
        for (std::size_t i = 0; i < nc; ++i) {
            int n = inv[model.components[i].id];
            report.inv_counts[i][j] = n;
            factor *= std::pow(1.0 - model.components[i].failure_prob, double(n));
        }
        for (std::size_t l = 0; l < nl; ++l) {
            double s = kb[model.links[l].id];
            report.msg_sizes[l][j] = s;
            factor *= std::pow(1.0 - model.links[l].failure_prob, s);
        }
        report.scenario_factors[j] = factor;
        weighted_survival += scenario.probability * factor;
    }

    report.reliability = weighted_survival;
    report.theta_s = 1.0 - weighted_survival;
    return report;
}

}  // namespace archopt
