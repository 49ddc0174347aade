#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "archopt/model.hpp"

namespace archopt {

struct SynchCall {
  std::string target_entry;
  double mean_calls = 1.0;
};

struct Activity {
  std::string id;
  std::string entry;       // owning entry id
  double host_demand = 0;  // seconds, already scaled by node speed
  std::vector<SynchCall> calls;
};

struct Entry {
  std::string id;
  std::string task;  // owning task id
};

enum class TaskKind { Reference, Server };

struct LqnTask {
  std::string id;
  std::string processor;  // empty for reference tasks (pure clients)
  int multiplicity = 1;   // threads; population for reference tasks
  TaskKind kind = TaskKind::Server;
  double think_time_s = 0.0;  // reference tasks only
  std::string scenario;       // source scenario id for reference tasks
};

struct Processor {
  std::string id;
  int multiplicity = 1;
  double speed_factor = 1.0;  // informational; demands are pre-scaled
};

struct LqnModel {
  std::vector<Processor> processors;
  std::vector<LqnTask> tasks;
  std::vector<Entry> entries;
  std::vector<Activity> activities;
};

struct SolverOptions {
  double tolerance = 1e-4;  // on successive processor utilizations
  int max_iters = 100;      // outer fixed-point iterations
  double relaxation = 0.5;  // applied to propagated waiting times
};

struct ScenarioPerf {
  std::string id;
  double throughput = 0.0;       // scenario completions per second
  double response_time_s = 0.0;  // one full scenario interaction
};

struct ProcessorPerf {
  std::string id;
  int multiplicity = 1;
  double utilization = 0.0;  // in [0, multiplicity]
};

struct PerformanceResults {
  std::vector<ScenarioPerf> scenarios;
  std::vector<ProcessorPerf> processors;
  int iterations = 0;
  bool converged = false;

  const ScenarioPerf* find_scenario(std::string_view id) const;
  const ProcessorPerf* find_processor(std::string_view id) const;
};

// Architecture -> layered queueing network. Nodes with identical deployment
// sets collapse into one multi-server processor; each component interacting in
// some scenario becomes a server task; each scenario becomes a reference task
// driving its root messages. Throws UnresolvableBehavior.
LqnModel transform(const ArchitectureModel& model);

// Processor id that transform() assigns to the component's hosting nodes.
std::string hosting_processor(const ArchitectureModel& model, std::string_view component_id);

// Layered fixed point: tasks are layered by call depth, each layer is solved
// as a closed queueing submodel (callers as chains), processors form one
// device submodel, entry waiting times propagate as inflated service times.
// Throws InvalidModel on cyclic task call graphs.
PerformanceResults solve(const LqnModel& lqn, const SolverOptions& opts = {});

// Mean relative improvement over matched indices: scenario throughput (+),
// scenario response time (-), processor utilization (+, with a correction
// that penalizes pushing utilization past 0.8). Throws EmptyIndexSet.
double perfq(const PerformanceResults& initial, const PerformanceResults& variant);

// Indented text rendering of the LQN (processors > tasks > entries >
// activities > calls); grammar documented in the README.
std::string dump_lqn(const LqnModel& lqn);

}  // namespace archopt
