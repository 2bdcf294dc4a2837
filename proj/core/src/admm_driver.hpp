#pragma once

#include <functional>
#include <optional>
#include <string>

#include "drlr/lpadmm.hpp"

namespace drlr::detail {

using AdmmStepFn =
    std::function<LpAdmmState(const LpAdmmState&, const LpAdmmParams&, double, StepInfo*)>;

// Shared outer loop of LP-ADMM and linearized ADMM: penalty setup, stopping
// rule, trace recording and solution assembly. `step` performs one iteration.
SubproblemResult run_linearized_admm(const SubproblemInstance& inst, const DrlrConfig& cfg,
                                     BoxQpSolverKind inner, const AdmmStepFn& step,
                                     const std::string& name,
                                     const std::optional<WarmStart>& init,
                                     const std::optional<ReferencePoint>& reference);

}  // namespace drlr::detail
