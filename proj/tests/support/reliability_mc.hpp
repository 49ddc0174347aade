#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "archopt/model.hpp"
#include "archopt/reliability.hpp"
#include "archopt/rng.hpp"

namespace archopt::oracle {

// Monte-Carlo reliability estimate: draw a scenario by its probability, then
// run one Bernoulli failure trial per component invocation and per traversed
// KB; the system survives a sample iff every trial does. Link totals must be
// whole KB so the per-KB trials match the closed form being checked.
inline double mc_reliability(const ArchitectureModel& m, std::uint64_t seed,
                             int samples = 1000000) {
    struct Opportunity {
        double fail = 0.0;
        int trials = 0;
    };
    std::vector<std::vector<Opportunity>> per_scenario;
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const Scenario& sc : m.scenarios) {
        std::vector<Opportunity> ops;
        auto inv = inv_counts(m, sc);
        for (const Component& c : m.components) {
            int n = inv[c.id];
            if (n > 0 && c.failure_prob > 0) ops.push_back({c.failure_prob, n});
        }
        auto kb = msg_sizes(m, sc);
        for (const CommLink& l : m.links) {
            double s = kb[l.id];
            int n = static_cast<int>(std::lround(s));
            if (std::abs(s - n) > 1e-9)
                throw std::invalid_argument("mc_reliability needs whole-KB link totals");
            if (n > 0 && l.failure_prob > 0) ops.push_back({l.failure_prob, n});
        }
        per_scenario.push_back(std::move(ops));
        acc += sc.probability;
        cumulative.push_back(acc);
    }
    if (std::abs(acc - 1.0) > 1e-9)
        throw std::invalid_argument("mc_reliability needs scenario probabilities summing to 1");

    Rng rng(seed);
    long long alive_count = 0;
    for (int s = 0; s < samples; ++s) {
        double u = rng.real();
        std::size_t j = 0;
        while (j + 1 < cumulative.size() && u >= cumulative[j]) ++j;
        bool alive = true;
        for (const Opportunity& op : per_scenario[j]) {
            for (int t = 0; t < op.trials; ++t)
                if (rng.bernoulli(op.fail)) {
                    alive = false;
                    break;
                }
            if (!alive) break;
        }
        alive_count += alive;
    }
    return static_cast<double>(alive_count) / samples;
}

}  // namespace archopt::oracle
