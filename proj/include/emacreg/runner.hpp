#pragma once

#include "emacreg/diagnostics.hpp"

namespace emacreg {

// Called after each recorded step (including step 0, the initial state).
using StepObserver = std::function<void(int step, const State&, const DiagnosticsRecord&)>;

// Advances from the interpolated/filtered initial state to end_time, one
// diagnostics record per step plus the initial one. Errors are filled when an
// analytic solution is supplied. Step failures propagate with their time
// stamp attached.
std::vector<DiagnosticsRecord> run(const Stepper& stepper, const VectorFn& u0,
                                   Scalar end_time,
                                   const AnalyticSolution* exact = nullptr,
                                   const std::vector<StepObserver>& observers = {});

}  // namespace emacreg
