#pragma once

#include <map>
#include <string>
#include <vector>

#include "archopt/model.hpp"

namespace archopt {

// System reliability under the component-based failure model: each
// invocation of a component and each KB shipped over a link is an
// independent failure opportunity, and a scenario succeeds only if every
// opportunity survives.
struct ReliabilityReport {
    double theta_s = 0.0;      // mean failure probability
    double reliability = 1.0;  // 1 - theta_s

    // survival probability of each scenario, in model scenario order
    std::vector<double> scenario_factors;

    // invocation counts, component i (model order) x scenario j
    std::vector<std::vector<int>> inv_counts;

    // traversed KB, link l (model order) x scenario j
    std::vector<std::vector<double>> msg_sizes;
};

// Invocations of each component in one scenario: receptions weighted by
// repetitions, rounded to the nearest integer. Components never invoked are
// present with count 0.
std::map<std::string, int> inv_counts(const ArchitectureModel& model,
                                      const Scenario& scenario);

// Total KB shipped over each link in one scenario: message size times
// repetitions, summed over the messages the link carries. Co-located and
// actor-sent messages cross no link. Throws MissingLink when a message has
// no route.
std::map<std::string, double> msg_sizes(const ArchitectureModel& model,
                                        const Scenario& scenario);

// Scenario-weighted survival probability of the whole system.
ReliabilityReport evaluate_reliability(const ArchitectureModel& model);

}  // namespace archopt
