#pragma once

#include <map>
#include <string>
#include <vector>

#include "archopt/lqn.hpp"
#include "archopt/model.hpp"

namespace archopt {

enum class AntipatternKind {
    PipeAndFilter,
    Blob,
    ConcurrentProcessingSystem,
    ExtensiveProcessing,
    EmptySemiTruck,
    TowerOfBabel,
};

const char* to_string(AntipatternKind kind);

// One suspected occurrence. literal_values holds, for every literal named
// "x", the triple x, x_lb, x_ub, so the probability can be recomputed from
// the report alone.
struct AntipatternInstance {
    AntipatternKind kind{};
    std::string target;
    double probability = 0.0;
    std::map<std::string, double> literal_values;
};

enum class DetectionMode { Fuzzy, Deterministic };

struct DetectionConfig {
    double fuzziness_threshold = 0.80;
    DetectionMode mode = DetectionMode::Fuzzy;
    // experimental: count_pas unchanged, pas_objective sums probabilities
    // instead of counting threshold crossings
    bool sum_probabilities = false;
};

// Position of a literal between the extremes observed on the whole system:
// 0 at lb, 1 at ub, linear in between; 0 when the extremes coincide.
// Throws OutOfBounds outside [lb, ub].
double fuzzy_probability(double literal, double lb, double ub);

// Scores the six antipattern kinds on the model and its solved performance
// indices. Only targets with probability > 0 are reported.
std::vector<AntipatternInstance> detect(const ArchitectureModel& model,
                                        const PerformanceResults& results,
                                        const DetectionConfig& config = {});

// Occurrences at or above the fuzziness threshold (a certainty threshold of
// 1 - 1e-9 in deterministic mode).
int count_pas(const std::vector<AntipatternInstance>& instances,
              const DetectionConfig& config = {});

// The optimizer's number-of-antipatterns objective: count_pas as a real, or
// the probability mass when config.sum_probabilities is set.
double pas_objective(const std::vector<AntipatternInstance>& instances,
                     const DetectionConfig& config = {});

}  // namespace archopt
