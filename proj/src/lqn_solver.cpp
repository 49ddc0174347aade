#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "archopt/errors.hpp"
#include "archopt/lqn.hpp"

namespace archopt {

const ScenarioPerf* PerformanceResults::find_scenario(std::string_view id) const {
  for (const auto& s : scenarios)
    if (s.id == id) return &s;
  return nullptr;
}

const ProcessorPerf* PerformanceResults::find_processor(std::string_view id) const {
  for (const auto& p : processors)
    if (p.id == id) return &p;
  return nullptr;
}

namespace {

constexpr double kTiny = 1e-12;

// Closed-QN submodel. Stations are FCFS queues with exponential service;
// chains may see chain-specific service times.
struct StationSpec {
  int servers = 1;
};

struct ChainSpec {
  int population = 1;
  double think = 0.0;
  std::vector<double> visits;   // per station, per chain cycle
  std::vector<double> service;  // per station, per visit
};

// queueing part of the residence: an arrival waits only for customers in
// excess of a free server
double queue_time(const StationSpec& st, double service, double seen) {
  return (service / st.servers) * std::max(0.0, seen - (st.servers - 1.0));
}

struct Residence {
  // residence[k][j]: per-visit residence of chain j at station k
  std::vector<std::vector<double>> residence;
};

// exact MVA recursion; multi-server stations carry their queue-length
// marginals so the recursion stays exact (waiting starts only past a free
// server)
Residence solve_exact_single(const std::vector<StationSpec>& stations, const ChainSpec& ch) {
  const std::size_t K = stations.size();
  const int N = ch.population;
  std::vector<double> q(K, 0.0), r(K, 0.0);
  double x = 0.0;
  std::vector<std::vector<double>> marg(K);  // p(j customers | n) for m>1 stations
  for (std::size_t k = 0; k < K; ++k)
    if (stations[k].servers > 1) {
      marg[k].assign(std::size_t(N) + 1, 0.0);
      marg[k][0] = 1.0;
    }

  for (int n = 1; n <= N; ++n) {
    double cycle = ch.think;
    for (std::size_t k = 0; k < K; ++k) {
      int m = stations[k].servers;
      if (m == 1) {
        r[k] = ch.service[k] * (1.0 + q[k]);
      } else {
        double idle_correction = 0.0;
        for (int j = 0; j <= m - 2; ++j) idle_correction += (m - 1 - j) * marg[k][j];
        r[k] = (ch.service[k] / m) * (1.0 + q[k] + idle_correction);
      }
      cycle += ch.visits[k] * r[k];
    }
    x = n / std::max(cycle, kTiny);
    for (std::size_t k = 0; k < K; ++k) {
      q[k] = x * ch.visits[k] * r[k];
      int m = stations[k].servers;
      if (m > 1) {
        std::vector<double> next(std::size_t(N) + 1, 0.0);
        double rest = 1.0;
        for (int j = n; j >= 1; --j) {
          next[j] = (x * ch.visits[k] * ch.service[k] / std::min(j, m)) * marg[k][j - 1];
          rest -= next[j];
        }
        next[0] = std::max(0.0, rest);
        marg[k] = std::move(next);
      }
    }
  }
  Residence sol;
  sol.residence.assign(K, std::vector<double>(1));
  for (std::size_t k = 0; k < K; ++k) sol.residence[k][0] = r[k];
  return sol;
}

// overlap[j][i] discounts chain i's queue as seen by an arriving chain-j
// customer. Chains fed by the same physical customers (a common upstream
// population fanned out over sibling callers) are not independent: the
// arriving customer must exclude itself from the populations it also
// belongs to, or shared stations charge phantom queueing.
Residence solve_schweitzer(const std::vector<StationSpec>& stations,
                           const std::vector<ChainSpec>& chains,
                           const std::vector<std::vector<double>>& overlap) {
  const std::size_t K = stations.size(), J = chains.size();
  std::vector<std::vector<double>> q(K, std::vector<double>(J, 0.0));
  std::vector<std::vector<double>> r(K, std::vector<double>(J, 0.0));

  for (std::size_t j = 0; j < J; ++j) {
    int visited = 0;
    for (std::size_t k = 0; k < K; ++k)
      if (chains[j].visits[k] > 0) ++visited;
    if (visited == 0) continue;
    for (std::size_t k = 0; k < K; ++k)
      if (chains[j].visits[k] > 0) q[k][j] = double(chains[j].population) / visited;
  }

  for (int it = 0; it < 2000; ++it) {
    double delta = 0.0;
    std::vector<double> x(J, 0.0);
    for (std::size_t j = 0; j < J; ++j) {
      double cycle = chains[j].think;
      for (std::size_t k = 0; k < K; ++k) {
        if (chains[j].visits[k] <= 0) continue;
        // an arriving chain-j customer sees its own class scaled by (N-1)/N
        // and sibling classes scaled by their overlap factor
        double seen = q[k][j] * (1.0 - 1.0 / std::max(chains[j].population, 1));
        for (std::size_t i = 0; i < J; ++i)
          if (i != j) seen += overlap[j][i] * q[k][i];
        r[k][j] = chains[j].service[k] +
                  queue_time(stations[k], chains[j].service[k], seen);
        cycle += chains[j].visits[k] * r[k][j];
      }
      x[j] = chains[j].population / std::max(cycle, kTiny);
    }
    for (std::size_t j = 0; j < J; ++j)
      for (std::size_t k = 0; k < K; ++k) {
        double nq = chains[j].visits[k] > 0 ? x[j] * chains[j].visits[k] * r[k][j] : 0.0;
        delta = std::max(delta, std::abs(nq - q[k][j]));
        q[k][j] = nq;
      }
    if (delta < 1e-10) break;
  }
  Residence sol;
  sol.residence = r;
  return sol;
}

// Chains touching disjoint station sets do not interact; solving each
// connected component separately lets single-chain components use exact MVA.
Residence solve_submodel(const std::vector<StationSpec>& stations_in,
                         const std::vector<ChainSpec>& chains,
                         const std::vector<std::vector<double>>& overlap) {
  const std::size_t K = stations_in.size(), J = chains.size();
  Residence out;
  out.residence.assign(K, std::vector<double>(J, 0.0));

  std::vector<int> comp(K, -1);
  {
    // union stations through the chains that visit them
    std::vector<int> parent(K);
    for (std::size_t k = 0; k < K; ++k) parent[k] = int(k);
    auto find = [&](int a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    for (const ChainSpec& ch : chains) {
      int first = -1;
      for (std::size_t k = 0; k < K; ++k) {
        if (ch.visits[k] <= 0) continue;
        if (first < 0)
          first = find(int(k));
        else
          parent[find(int(k))] = first;
      }
    }
    for (std::size_t k = 0; k < K; ++k) comp[k] = find(int(k));
  }

  std::vector<int> roots;
  for (std::size_t k = 0; k < K; ++k)
    if (std::find(roots.begin(), roots.end(), comp[k]) == roots.end())
      roots.push_back(comp[k]);

  for (int root : roots) {
    std::vector<int> stations;
    for (std::size_t k = 0; k < K; ++k)
      if (comp[k] == root) stations.push_back(int(k));
    std::vector<StationSpec> sub_stations;
    for (int k : stations) sub_stations.push_back(stations_in[k]);

    std::vector<int> member_chains;
    std::vector<ChainSpec> sub_chains;
    for (std::size_t j = 0; j < J; ++j) {
      bool visits_here = false;
      for (int k : stations)
        if (chains[j].visits[k] > 0) visits_here = true;
      if (!visits_here) continue;
      ChainSpec sc;
      sc.population = chains[j].population;
      sc.think = chains[j].think;
      for (int k : stations) {
        sc.visits.push_back(chains[j].visits[k]);
        sc.service.push_back(chains[j].service[k]);
      }
      sub_chains.push_back(std::move(sc));
      member_chains.push_back(int(j));
    }
    if (sub_chains.empty()) continue;

    std::vector<std::vector<double>> sub_overlap(member_chains.size());
    for (std::size_t sj = 0; sj < member_chains.size(); ++sj)
      for (std::size_t si = 0; si < member_chains.size(); ++si)
        sub_overlap[sj].push_back(overlap[member_chains[sj]][member_chains[si]]);

    Residence sol = sub_chains.size() == 1
                        ? solve_exact_single(sub_stations, sub_chains[0])
                        : solve_schweitzer(sub_stations, sub_chains, sub_overlap);
    for (std::size_t sk = 0; sk < stations.size(); ++sk)
      for (std::size_t sj = 0; sj < member_chains.size(); ++sj)
        out.residence[stations[sk]][member_chains[sj]] = sol.residence[sk][sj];
  }
  return out;
}

Residence solve_submodel(const std::vector<StationSpec>& stations,
                         const std::vector<ChainSpec>& chains) {
  std::vector<std::vector<double>> ones(chains.size(),
                                        std::vector<double>(chains.size(), 1.0));
  return solve_submodel(stations, chains, ones);
}

struct EntryInfo {
  int task = -1;
  double demand = 0.0;
  std::vector<std::pair<int, double>> calls;  // (entry index, mean calls)
};

}  // namespace

PerformanceResults solve(const LqnModel& lqn, const SolverOptions& opts) {
  const int nt = static_cast<int>(lqn.tasks.size());
  const int ne = static_cast<int>(lqn.entries.size());
  const int np = static_cast<int>(lqn.processors.size());

  std::unordered_map<std::string, int> task_idx, entry_idx, proc_idx;
  for (int i = 0; i < nt; ++i) task_idx[lqn.tasks[i].id] = i;
  for (int i = 0; i < ne; ++i) entry_idx[lqn.entries[i].id] = i;
  for (int i = 0; i < np; ++i) {
    if (lqn.processors[i].multiplicity < 1)
      throw InvalidModel("processor '" + lqn.processors[i].id + "': multiplicity must be >= 1");
    proc_idx[lqn.processors[i].id] = i;
  }

  std::vector<EntryInfo> entries(ne);
  std::vector<std::vector<int>> task_entries(nt);
  std::vector<int> task_proc(nt, -1);
  for (int i = 0; i < nt; ++i) {
    const LqnTask& t = lqn.tasks[i];
    if (t.multiplicity < 1) throw InvalidModel("task '" + t.id + "': multiplicity must be >= 1");
    if (t.kind == TaskKind::Server) {
      auto it = proc_idx.find(t.processor);
      if (it == proc_idx.end())
        throw InvalidModel("task '" + t.id + "': unknown processor '" + t.processor + "'");
      task_proc[i] = it->second;
    }
  }
  for (int i = 0; i < ne; ++i) {
    auto it = task_idx.find(lqn.entries[i].task);
    if (it == task_idx.end())
      throw InvalidModel("entry '" + lqn.entries[i].id + "': unknown task '" +
                         lqn.entries[i].task + "'");
    entries[i].task = it->second;
    task_entries[it->second].push_back(i);
  }
  for (const Activity& a : lqn.activities) {
    auto it = entry_idx.find(a.entry);
    if (it == entry_idx.end())
      throw InvalidModel("activity '" + a.id + "': unknown entry '" + a.entry + "'");
    entries[it->second].demand += a.host_demand;
    for (const SynchCall& c : a.calls) {
      auto tgt = entry_idx.find(c.target_entry);
      if (tgt == entry_idx.end())
        throw InvalidModel("activity '" + a.id + "': unknown call target '" + c.target_entry +
                           "'");
      entries[it->second].calls.emplace_back(tgt->second, c.mean_calls);
    }
  }
  for (int i = 0; i < nt; ++i)
    if (lqn.tasks[i].kind == TaskKind::Reference && task_entries[i].empty())
      throw InvalidModel("reference task '" + lqn.tasks[i].id + "' has no entry");

  // task-level call DAG, layered by longest path from the references
  std::vector<std::vector<int>> callees(nt);
  std::vector<int> indeg(nt, 0);
  for (int e = 0; e < ne; ++e) {
    for (const auto& [tgt, mean] : entries[e].calls) {
      int from = entries[e].task, to = entries[tgt].task;
      if (from == to) throw InvalidModel("task '" + lqn.tasks[from].id + "' calls itself");
      callees[from].push_back(to);
      ++indeg[to];
    }
  }
  std::vector<int> layer(nt, 0);
  {
    std::vector<int> ready, deg = indeg;
    int seen = 0;
    for (int i = 0; i < nt; ++i)
      if (deg[i] == 0) ready.push_back(i);
    while (!ready.empty()) {
      int t = ready.back();
      ready.pop_back();
      ++seen;
      for (int c : callees[t]) {
        layer[c] = std::max(layer[c], layer[t] + 1);
        if (--deg[c] == 0) ready.push_back(c);
      }
    }
    if (seen != nt) throw InvalidModel("task call graph is cyclic");
  }
  int max_layer = 0;
  for (int i = 0; i < nt; ++i) max_layer = std::max(max_layer, layer[i]);

  // entries sorted by task layer form a topological order of the entry graph
  std::vector<int> entry_order(ne);
  for (int i = 0; i < ne; ++i) entry_order[i] = i;
  std::stable_sort(entry_order.begin(), entry_order.end(),
                   [&](int a, int b) { return layer[entries[a].task] < layer[entries[b].task]; });

  std::vector<int> refs;
  for (int i = 0; i < nt; ++i)
    if (lqn.tasks[i].kind == TaskKind::Reference) refs.push_back(i);
  const int nr = static_cast<int>(refs.size());

  // static visit ratios per reference chain
  std::vector<std::vector<double>> visit(nr, std::vector<double>(ne, 0.0));
  for (int s = 0; s < nr; ++s) {
    for (int e : task_entries[refs[s]]) visit[s][e] = 1.0;
    for (int e : entry_order)
      for (const auto& [tgt, mean] : entries[e].calls) visit[s][tgt] += visit[s][e] * mean;
  }

  // customers that can ever occupy a task: reachable reference populations
  // bound the concurrency its thread pool has to absorb
  std::vector<int> pop_cap(nt, 0);
  std::vector<std::vector<char>> reach(nt, std::vector<char>(nr, 0));
  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < nr; ++s) {
      bool reached = false;
      for (int e : task_entries[t])
        if (visit[s][e] > 0) reached = true;
      if (reached) {
        reach[t][s] = 1;
        pop_cap[t] += lqn.tasks[refs[s]].multiplicity;
      }
    }
  }
  auto eff_pop = [&](int t) { return std::min(lqn.tasks[t].multiplicity, pop_cap[t]); };

  // queue discount between two caller tasks fed (partly) by the same
  // customers. An arriving chain-a customer belonging to a population that
  // also feeds chain b can never find itself queued there, so it sees b's
  // queue short by one customer out of b's source population; fully
  // disjoint sources stay independent.
  auto chain_overlap = [&](int a, int b) {
    bool shares = false;
    int total_b = 0;
    for (int s = 0; s < nr; ++s) {
      if (reach[b][s]) total_b += lqn.tasks[refs[s]].multiplicity;
      if (reach[a][s] && reach[b][s]) shares = true;
    }
    if (!shares || total_b == 0) return 1.0;
    return 1.0 - 1.0 / total_b;
  };

  // iterated state
  std::vector<double> s_entry(ne, 0.0);
  std::vector<double> w_proc(ne, 0.0);           // processor wait per entry visit
  std::map<std::pair<int, int>, double> w_task;  // (caller task, callee task) -> thread wait
  std::map<std::pair<int, int>, double> w_dev;   // (reference idx, processor) -> cpu wait
  std::vector<double> x_ref(nr, 0.0);
  std::vector<double> f_entry(ne, 0.0), f_task(nt, 0.0);
  std::vector<double> sbar(nt, 0.0);
  std::vector<double> util(np, 0.0), util_prev(np, -1.0);

  auto w_between = [&](int from, int to) {
    auto it = w_task.find({from, to});
    return it == w_task.end() ? 0.0 : it->second;
  };

  const double alpha = opts.relaxation;
  int iterations = 0;
  bool converged = false;

  while (iterations < opts.max_iters) {
    ++iterations;

    // 1. entry holding times, deepest layers first
    for (auto it = entry_order.rbegin(); it != entry_order.rend(); ++it) {
      int e = *it;
      int t = entries[e].task;
      double s = entries[e].demand;
      if (entries[e].demand > 0) s += w_proc[e];
      for (const auto& [tgt, mean] : entries[e].calls)
        s += mean * (w_between(t, entries[tgt].task) + s_entry[tgt]);
      s_entry[e] = s;
    }

    // 2. chain throughputs and flows
    for (int s = 0; s < nr; ++s) {
      const LqnTask& rt = lqn.tasks[refs[s]];
      double resp = 0.0;
      for (int e : task_entries[refs[s]]) resp += s_entry[e];
      x_ref[s] = rt.multiplicity / std::max(rt.think_time_s + resp, kTiny);
    }
    std::fill(f_entry.begin(), f_entry.end(), 0.0);
    for (int s = 0; s < nr; ++s)
      for (int e = 0; e < ne; ++e) f_entry[e] += x_ref[s] * visit[s][e];
    std::fill(f_task.begin(), f_task.end(), 0.0);
    for (int e = 0; e < ne; ++e) f_task[entries[e].task] += f_entry[e];

    // 3. per-task aggregate holding time
    for (int t = 0; t < nt; ++t) {
      double num = 0.0, weight = 0.0;
      for (int e : task_entries[t]) {
        num += f_entry[e] * s_entry[e];
        weight += f_entry[e];
      }
      sbar[t] = weight > kTiny ? num / weight : 0.0;
    }

    // 4. utilizations by the utilization law; convergence check
    std::fill(util.begin(), util.end(), 0.0);
    for (int e = 0; e < ne; ++e) {
      int p = task_proc[entries[e].task];
      if (p >= 0) util[p] += f_entry[e] * entries[e].demand;
    }
    double delta = 0.0;
    for (int p = 0; p < np; ++p) delta = std::max(delta, std::abs(util[p] - util_prev[p]));
    util_prev = util;
    if (iterations > 1 && delta < opts.tolerance) {
      converged = true;
      break;
    }

    // 5. software submodels: per layer, this layer's tasks queue for threads,
    // their direct callers circulate as chains of thread-count population
    for (int lvl = 1; lvl <= max_layer; ++lvl) {
      std::vector<int> cand;
      for (int t = 0; t < nt; ++t)
        if (lqn.tasks[t].kind == TaskKind::Server && layer[t] == lvl && f_task[t] > kTiny)
          cand.push_back(t);
      if (cand.empty()) continue;

      // flow[c][t]: calls per second from caller task c into candidate t
      std::map<int, std::map<int, double>> flow;
      for (int e = 0; e < ne; ++e) {
        if (f_entry[e] <= kTiny) continue;
        for (const auto& [tgt, mean] : entries[e].calls) {
          int ct = entries[tgt].task;
          if (std::find(cand.begin(), cand.end(), ct) != cand.end())
            flow[entries[e].task][ct] += f_entry[e] * mean;
        }
      }

      // a station whose servers cover every caller that can be simultaneously
      // active never queues
      std::vector<int> stations;
      for (int t : cand) {
        int caller_pop = 0;
        for (const auto& [c, into] : flow)
          if (into.count(t)) caller_pop += eff_pop(c);
        if (lqn.tasks[t].multiplicity >= std::min(caller_pop, pop_cap[t])) {
          for (const auto& [c, into] : flow)
            if (into.count(t)) {
              auto it = w_task.find({c, t});
              if (it != w_task.end()) it->second *= (1.0 - alpha);
            }
        } else {
          stations.push_back(t);
        }
      }
      if (stations.empty()) continue;

      std::vector<StationSpec> specs;
      for (int t : stations) specs.push_back(StationSpec{lqn.tasks[t].multiplicity});

      std::vector<ChainSpec> chains;
      std::vector<int> chain_task;
      for (const auto& [c, into] : flow) {
        double fc = f_task[c];
        if (fc <= kTiny) continue;
        ChainSpec ch;
        ch.population = eff_pop(c);
        ch.visits.assign(stations.size(), 0.0);
        ch.service.assign(stations.size(), 0.0);
        double at_stations = 0.0;
        bool any = false;
        for (std::size_t k = 0; k < stations.size(); ++k) {
          auto it = into.find(stations[k]);
          if (it == into.end()) continue;
          any = true;
          ch.visits[k] = it->second / fc;
          ch.service[k] = sbar[stations[k]];
          at_stations += ch.visits[k] * (w_between(c, stations[k]) + ch.service[k]);
        }
        if (!any) continue;
        ch.think = std::max(0.0, ch.population / fc - at_stations);
        chains.push_back(std::move(ch));
        chain_task.push_back(c);
      }
      if (chains.empty()) continue;

      std::vector<std::vector<double>> overlap(chains.size(),
                                               std::vector<double>(chains.size(), 1.0));
      for (std::size_t j = 0; j < chains.size(); ++j)
        for (std::size_t i = 0; i < chains.size(); ++i)
          if (i != j) overlap[j][i] = chain_overlap(chain_task[j], chain_task[i]);

      Residence sol = solve_submodel(specs, chains, overlap);
      for (std::size_t j = 0; j < chains.size(); ++j)
        for (std::size_t k = 0; k < stations.size(); ++k) {
          if (chains[j].visits[k] <= 0) continue;
          double fresh = std::max(0.0, sol.residence[k][j] - chains[j].service[k]);
          double& slot = w_task[{chain_task[j], stations[k]}];
          slot = (1.0 - alpha) * slot + alpha * fresh;
        }
    }

    // 6. device submodel: scenario populations circulate over the processors
    {
      // per (reference, processor): visits and mean demand per visit
      std::vector<std::vector<double>> v_sp(nr, std::vector<double>(np, 0.0));
      std::vector<std::vector<double>> d_sp(nr, std::vector<double>(np, 0.0));
      for (int s = 0; s < nr; ++s)
        for (int e = 0; e < ne; ++e) {
          int p = task_proc[entries[e].task];
          if (p < 0 || entries[e].demand <= 0 || visit[s][e] <= 0) continue;
          v_sp[s][p] += visit[s][e];
          d_sp[s][p] += visit[s][e] * entries[e].demand;
        }
      for (int s = 0; s < nr; ++s)
        for (int p = 0; p < np; ++p)
          if (v_sp[s][p] > 0) d_sp[s][p] /= v_sp[s][p];

      // concurrency at a processor is capped by both customers and threads
      std::vector<int> stations;
      for (int p = 0; p < np; ++p) {
        int threads = 0;
        for (int t = 0; t < nt; ++t)
          if (task_proc[t] == p && f_task[t] > kTiny) threads += eff_pop(t);
        int customers = 0;
        for (int s = 0; s < nr; ++s)
          if (v_sp[s][p] > 0) customers += lqn.tasks[refs[s]].multiplicity;
        if (threads == 0 || customers == 0) continue;
        if (lqn.processors[p].multiplicity >= std::min(threads, customers)) {
          for (int s = 0; s < nr; ++s) {
            auto it = w_dev.find({s, p});
            if (it != w_dev.end()) it->second *= (1.0 - alpha);
          }
        } else {
          stations.push_back(p);
        }
      }

      if (!stations.empty()) {
        std::vector<StationSpec> specs;
        for (int p : stations) specs.push_back(StationSpec{lqn.processors[p].multiplicity});
        std::vector<ChainSpec> chains;
        std::vector<int> chain_ref;
        for (int s = 0; s < nr; ++s) {
          ChainSpec ch;
          ch.population = lqn.tasks[refs[s]].multiplicity;
          ch.visits.assign(stations.size(), 0.0);
          ch.service.assign(stations.size(), 0.0);
          double at_stations = 0.0;
          bool any = false;
          for (std::size_t k = 0; k < stations.size(); ++k) {
            int p = stations[k];
            if (v_sp[s][p] <= 0) continue;
            any = true;
            ch.visits[k] = v_sp[s][p];
            ch.service[k] = d_sp[s][p];
            auto it = w_dev.find({s, p});
            double w = it == w_dev.end() ? 0.0 : it->second;
            at_stations += ch.visits[k] * (w + ch.service[k]);
          }
          if (!any) continue;
          ch.think = std::max(0.0, ch.population / std::max(x_ref[s], kTiny) - at_stations);
          chains.push_back(std::move(ch));
          chain_ref.push_back(s);
        }
        if (!chains.empty()) {
          Residence sol = solve_submodel(specs, chains);
          for (std::size_t j = 0; j < chains.size(); ++j)
            for (std::size_t k = 0; k < stations.size(); ++k) {
              if (chains[j].visits[k] <= 0) continue;
              double fresh = std::max(0.0, sol.residence[k][j] - chains[j].service[k]);
              double& slot = w_dev[{chain_ref[j], stations[k]}];
              slot = (1.0 - alpha) * slot + alpha * fresh;
            }
        }
      }

      // fold the per-chain processor waits back onto entries
      for (int e = 0; e < ne; ++e) {
        int p = task_proc[entries[e].task];
        if (p < 0 || entries[e].demand <= 0) {
          w_proc[e] = 0.0;
          continue;
        }
        double num = 0.0, weight = 0.0;
        for (int s = 0; s < nr; ++s) {
          if (visit[s][e] <= 0) continue;
          auto it = w_dev.find({s, p});
          double w = it == w_dev.end() ? 0.0 : it->second;
          num += x_ref[s] * visit[s][e] * w;
          weight += x_ref[s] * visit[s][e];
        }
        w_proc[e] = weight > kTiny ? num / weight : 0.0;
      }
    }
  }

  PerformanceResults out;
  out.iterations = iterations;
  out.converged = converged;
  for (int s = 0; s < nr; ++s) {
    const LqnTask& rt = lqn.tasks[refs[s]];
    double resp = 0.0;
    for (int e : task_entries[refs[s]]) resp += s_entry[e];
    out.scenarios.push_back(ScenarioPerf{rt.scenario.empty() ? rt.id : rt.scenario,
                                         x_ref[s], resp});
  }
  for (int p = 0; p < np; ++p) {
    // the law U = X*D can transiently overshoot capacity by the convergence
    // tolerance; physical utilization never exceeds the server count
    double u = std::min(util[p], double(lqn.processors[p].multiplicity));
    out.processors.push_back(ProcessorPerf{lqn.processors[p].id,
                                           lqn.processors[p].multiplicity, u});
  }
  return out;
}

}  // namespace archopt
