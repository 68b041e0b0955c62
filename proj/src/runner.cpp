#include "emacreg/runner.hpp"

#include <cmath>

namespace emacreg {

std::vector<DiagnosticsRecord> run(const Stepper& stepper, const VectorFn& u0,
                                   Scalar end_time, const AnalyticSolution* exact,
                                   const std::vector<StepObserver>& observers) {
  std::vector<DiagnosticsRecord> records;
  State current = stepper.initial_state(u0);
  records.push_back(make_record(current, exact));
  for (const auto& obs : observers) obs(0, current, records.back());

  const Scalar dt = stepper.config().dt;
  const int nsteps = static_cast<int>(std::llround(end_time / dt));
  State previous;
  for (int step = 1; step <= nsteps; ++step) {
    State next;
    try {
      next = stepper.advance(current, step > 1 ? &previous : nullptr);
    } catch (const StateError& e) {
      throw StateError("run: step " + std::to_string(step) + " failed: " + e.what());
    }
    previous = std::move(current);
    current = std::move(next);
    records.push_back(make_record(current, exact));
    for (const auto& obs : observers) obs(step, current, records.back());
  }
  return records;
}

}  // namespace emacreg
