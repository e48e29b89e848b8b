// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#ifndef FXC_REPORTS_HPP
#define FXC_REPORTS_HPP

#include <string>
#include <vector>

#include "fxc/pipeline.hpp"

namespace fxc {

/// Training history CSV: header `epoch,mse`, MSE at full precision.
std::string history_to_csv(const std::vector<double>& mse_history);

/// Grid CSV: header `hidden,rate,accuracy_percent`, one row per cell in
/// hidden-major order.
std::string grid_to_csv(const GridResult& grid);

/// Evaluation CSV: per-class confusion counts plus accuracy, then
/// `average` and `pooled` summary rows.
std::string eval_to_csv(const EvalReport& report);

/// Human-readable confusion matrix and per-class accuracy table.
std::string eval_to_text(const EvalReport& report);

} // namespace fxc

#endif
