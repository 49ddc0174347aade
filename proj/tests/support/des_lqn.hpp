#pragma once

// Discrete-event simulator for layered client-server models: reference
// populations think, then walk their call trees; every call synchronously
// blocks one thread of the target task, every demand block occupies one unit
// of the task's processor (FIFO). Demands and think times are exponential;
// call counts are sampled as floor(mean) plus a Bernoulli on the fraction.
// Completely independent of the analytic solver; used as a test oracle only.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "archopt/lqn.hpp"
#include "archopt/rng.hpp"

namespace archopt::des {

struct DesResult {
  std::map<std::string, double> throughput;   // by scenario id
  std::map<std::string, double> utilization;  // by processor id
};

namespace detail {

struct Frame {
  int entry = -1;
  std::size_t act = 0;        // index into the entry's activity list
  std::size_t call = 0;       // index into the current activity's calls
  long calls_left = -1;       // -1: count not sampled yet
  bool demand_done = false;   // current activity's demand already served
};

struct Customer {
  int ref = -1;  // reference task index
  std::vector<Frame> stack;
  double pending_dur = 0.0;  // sampled CPU demand while waiting for a unit
  int pending_entry = -1;    // entry to enter once a task thread frees up
};

struct Pool {
  int free = 0;
  std::deque<int> waiters;
};

enum class EvKind { ThinkDone, ServiceDone };

struct Event {
  double time;
  std::uint64_t seq;
  EvKind kind;
  int customer;
  int proc;
  bool operator>(const Event& o) const {
    return time != o.time ? time > o.time : seq > o.seq;
  }
};

}  // namespace detail

inline DesResult simulate(const LqnModel& lqn, std::uint64_t seed, double sim_time,
                          double warmup_fraction = 0.2) {
  using namespace detail;
  const int nt = static_cast<int>(lqn.tasks.size());
  const int ne = static_cast<int>(lqn.entries.size());
  const int np = static_cast<int>(lqn.processors.size());

  std::unordered_map<std::string, int> task_idx, entry_idx, proc_idx;
  for (int i = 0; i < nt; ++i) task_idx[lqn.tasks[i].id] = i;
  for (int i = 0; i < ne; ++i) entry_idx[lqn.entries[i].id] = i;
  for (int i = 0; i < np; ++i) proc_idx[lqn.processors[i].id] = i;

  std::vector<int> entry_task(ne), task_proc(nt, -1);
  std::vector<std::vector<int>> task_entries(nt);
  for (int i = 0; i < ne; ++i) {
    entry_task[i] = task_idx.at(lqn.entries[i].task);
    task_entries[entry_task[i]].push_back(i);
  }
  for (int i = 0; i < nt; ++i)
    if (lqn.tasks[i].kind == TaskKind::Server) task_proc[i] = proc_idx.at(lqn.tasks[i].processor);

  struct Act {
    double demand;
    std::vector<std::pair<int, double>> calls;  // (entry, mean)
  };
  std::vector<std::vector<Act>> entry_acts(ne);
  for (const Activity& a : lqn.activities) {
    Act act;
    act.demand = a.host_demand;
    for (const SynchCall& c : a.calls) act.calls.emplace_back(entry_idx.at(c.target_entry), c.mean_calls);
    entry_acts[entry_idx.at(a.entry)].push_back(std::move(act));
  }

  std::vector<Pool> threads(nt), cpus(np);
  for (int i = 0; i < nt; ++i) threads[i].free = lqn.tasks[i].multiplicity;
  for (int i = 0; i < np; ++i) cpus[i].free = lqn.processors[i].multiplicity;

  Rng rng(seed);
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events;
  std::uint64_t seq = 0;
  double now = 0.0;
  const double warm = sim_time * warmup_fraction;

  std::vector<Customer> customers;
  std::vector<double> busy_last(np, 0.0);   // time of last busy-count change
  std::vector<double> busy_acc(np, 0.0);    // busy server-seconds after warmup
  std::vector<int> busy_count(np, 0);
  std::vector<long> completions(nt, 0);

  auto busy_touch = [&](int p) {
    if (now > warm) busy_acc[p] += busy_count[p] * (now - std::max(busy_last[p], warm));
    busy_last[p] = now;
  };

  std::deque<int> runnable;

  auto request_cpu = [&](int cu, int p, double dur) {
    if (cpus[p].free > 0) {
      --cpus[p].free;
      busy_touch(p);
      ++busy_count[p];
      events.push(Event{now + dur, seq++, EvKind::ServiceDone, cu, p});
    } else {
      customers[cu].pending_dur = dur;
      cpus[p].waiters.push_back(cu);
    }
  };

  // runs a customer until it blocks on a think, a CPU unit, or a task thread
  auto step = [&](int ci) {
    Customer& cu = customers[ci];
    for (;;) {
      if (cu.stack.empty()) {
        if (now > warm) ++completions[cu.ref];
        double think = lqn.tasks[cu.ref].think_time_s;
        if (think > 0) {
          events.push(Event{now + rng.exponential(think), seq++, EvKind::ThinkDone, ci, -1});
          return;
        }
        cu.stack.push_back(Frame{task_entries[cu.ref][0], 0, 0, -1, false});
        continue;
      }
      Frame& fr = cu.stack.back();
      const std::vector<Act>& acts = entry_acts[fr.entry];
      if (fr.act == acts.size()) {
        int t = entry_task[fr.entry];
        cu.stack.pop_back();
        if (lqn.tasks[t].kind == TaskKind::Server) {
          Pool& pool = threads[t];
          if (!pool.waiters.empty()) {
            int w = pool.waiters.front();
            pool.waiters.pop_front();
            customers[w].stack.push_back(
                Frame{customers[w].pending_entry, 0, 0, -1, false});
            runnable.push_back(w);
          } else {
            ++pool.free;
          }
        }
        if (!cu.stack.empty()) --cu.stack.back().calls_left;
        continue;
      }
      const Act& a = acts[fr.act];
      if (!fr.demand_done && a.demand > 0) {
        request_cpu(ci, task_proc[entry_task[fr.entry]], rng.exponential(a.demand));
        return;
      }
      if (fr.call == a.calls.size()) {
        ++fr.act;
        fr.call = 0;
        fr.calls_left = -1;
        fr.demand_done = false;
        continue;
      }
      if (fr.calls_left < 0) {
        double mean = a.calls[fr.call].second;
        double whole = std::floor(mean);
        fr.calls_left = long(whole) + (rng.bernoulli(mean - whole) ? 1 : 0);
      }
      if (fr.calls_left == 0) {
        ++fr.call;
        fr.calls_left = -1;
        continue;
      }
      int tgt = a.calls[fr.call].first;
      int tt = entry_task[tgt];
      if (threads[tt].free > 0) {
        --threads[tt].free;
        cu.stack.push_back(Frame{tgt, 0, 0, -1, false});
        continue;
      }
      cu.pending_entry = tgt;
      threads[tt].waiters.push_back(ci);
      return;
    }
  };

  // one customer per unit of reference population
  for (int t = 0; t < nt; ++t) {
    if (lqn.tasks[t].kind != TaskKind::Reference) continue;
    for (int k = 0; k < lqn.tasks[t].multiplicity; ++k) {
      Customer cu;
      cu.ref = t;
      cu.stack.push_back(Frame{task_entries[t][0], 0, 0, -1, false});
      customers.push_back(cu);
      runnable.push_back(int(customers.size()) - 1);
    }
  }

  auto drain = [&]() {
    while (!runnable.empty()) {
      int ci = runnable.front();
      runnable.pop_front();
      step(ci);
    }
  };
  drain();

  while (!events.empty() && events.top().time <= sim_time) {
    Event ev = events.top();
    events.pop();
    now = ev.time;
    if (ev.kind == EvKind::ThinkDone) {
      customers[ev.customer].stack.push_back(
          Frame{task_entries[customers[ev.customer].ref][0], 0, 0, -1, false});
      runnable.push_back(ev.customer);
    } else {
      int p = ev.proc;
      busy_touch(p);
      --busy_count[p];
      ++cpus[p].free;
      if (!cpus[p].waiters.empty()) {
        int w = cpus[p].waiters.front();
        cpus[p].waiters.pop_front();
        --cpus[p].free;
        busy_touch(p);
        ++busy_count[p];
        events.push(Event{now + customers[w].pending_dur, seq++, EvKind::ServiceDone, w, p});
      }
      Customer& cu = customers[ev.customer];
      assert(!cu.stack.empty());
      cu.stack.back().demand_done = true;
      runnable.push_back(ev.customer);
    }
    drain();
  }

  now = sim_time;
  for (int p = 0; p < np; ++p) busy_touch(p);

  DesResult out;
  const double span = sim_time - warm;
  for (int t = 0; t < nt; ++t) {
    if (lqn.tasks[t].kind != TaskKind::Reference) continue;
    std::string id = lqn.tasks[t].scenario.empty() ? lqn.tasks[t].id : lqn.tasks[t].scenario;
    out.throughput[id] = completions[t] / span;
  }
  for (int p = 0; p < np; ++p) out.utilization[lqn.processors[p].id] = busy_acc[p] / span;
  return out;
}

}  // namespace archopt::des
