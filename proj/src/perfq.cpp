#include <cmath>
#include <string>

#include "archopt/errors.hpp"
#include "archopt/lqn.hpp"

namespace archopt {

namespace {

constexpr double kUtilCap = 0.8;

// utilization terms are penalized when either side crosses the cap
double util_correction(double initial, double final_v) {
  if (final_v > kUtilCap && initial > kUtilCap)
    return -2.0 * (final_v - initial) / (final_v + initial);
  if (final_v > kUtilCap) return kUtilCap - final_v;
  if (initial > kUtilCap) return initial - kUtilCap;
  return 0.0;
}

}  // namespace

double perfq(const PerformanceResults& initial, const PerformanceResults& variant) {
  double sum = 0.0;
  int count = 0;

  // an index with both sides zero carries no observable change and is skipped
  auto gain = [&](double i, double f, double direction) {
    if (f + i == 0.0) return;
    sum += direction * (f - i) / (f + i);
    ++count;
  };

  for (const ScenarioPerf& f : variant.scenarios) {
    const ScenarioPerf* i = initial.find_scenario(f.id);
    if (!i) continue;
    gain(i->throughput, f.throughput, +1.0);         // higher is better
    gain(i->response_time_s, f.response_time_s, -1.0);  // lower is better
  }

  for (const ProcessorPerf& f : variant.processors) {
    const ProcessorPerf* i = initial.find_processor(f.id);
    if (!i) continue;
    double uf = f.utilization / f.multiplicity;
    double ui = i->utilization / i->multiplicity;
    if (uf + ui == 0.0) continue;
    sum += (uf - ui) / (uf + ui) + util_correction(ui, uf);
    ++count;
  }

  if (count == 0) throw EmptyIndexSet("no performance indices shared by both results");
  return sum / count;
}

}  // namespace archopt
