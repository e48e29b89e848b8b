// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#include "fxc/reports.hpp"

#include <cstdarg>
#include <cstdio>

namespace fxc {

namespace {

std::string fmt(const char* format, ...) {
    char buf[128];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

} // namespace

std::string history_to_csv(const std::vector<double>& mse_history) {
    std::string out = "epoch,mse\n";
    for (std::size_t i = 0; i < mse_history.size(); ++i)
        out += fmt("%zu,%.17g\n", i + 1, mse_history[i]);
    return out;
}

std::string grid_to_csv(const GridResult& grid) {
    std::string out = "hidden,rate,accuracy_percent\n";
    for (const GridCell& cell : grid.cells)
        out += fmt("%d,%g,%.2f\n", cell.hidden, cell.rate, cell.accuracy);
    return out;
}

std::string eval_to_csv(const EvalReport& report) {
    std::string out = "label";
    for (int c = 0; c < kLabelCount; ++c)
        out += fmt(",pred_%s", label_name(static_cast<ExpressionLabel>(c)));
    out += ",correct,total,accuracy_percent\n";
    for (int t = 0; t < kLabelCount; ++t) {
        out += label_name(static_cast<ExpressionLabel>(t));
        for (int p = 0; p < kLabelCount; ++p)
            out += fmt(",%d", report.confusion[t][p]);
        out += fmt(",%d,%d,%.2f\n", report.correct[t], report.totals[t],
                   report.per_class[t]);
    }
    out += fmt("average,,,,,,,,,,%.2f\n", report.average);
    int correct = 0, total = 0;
    for (int c = 0; c < kLabelCount; ++c) {
        correct += report.correct[c];
        total += report.totals[c];
    }
    out += fmt("pooled,,,,,,,,%d,%d,%.2f\n", correct, total, report.pooled);
    return out;
}

std::string eval_to_text(const EvalReport& report) {
    std::string out = "Confusion matrix (rows true, columns predicted):\n";
    out += fmt("%-10s", "");
    for (int c = 0; c < kLabelCount; ++c)
        out += fmt("%5.4s", label_name(static_cast<ExpressionLabel>(c)));
    out += "\n";
    for (int t = 0; t < kLabelCount; ++t) {
        out += fmt("%-10s", label_name(static_cast<ExpressionLabel>(t)));
        for (int p = 0; p < kLabelCount; ++p)
            out += fmt("%5d", report.confusion[t][p]);
        out += "\n";
    }
    out += fmt("\n%-10s  %8s  %10s\n", "Feeling", "Correct", "Accuracy %");
    for (int t = 0; t < kLabelCount; ++t)
        out += fmt("%-10s  %4d/%-3d  %10.2f\n",
                   label_name(static_cast<ExpressionLabel>(t)), report.correct[t],
                   report.totals[t], report.per_class[t]);
    out += fmt("%-10s  %8s  %10.2f\n", "Average", "", report.average);
    int correct = 0, total = 0;
    for (int c = 0; c < kLabelCount; ++c) {
        correct += report.correct[c];
        total += report.totals[c];
    }
    out += fmt("%-10s  %4d/%-3d  %10.2f\n", "Pooled", correct, total,
               report.pooled);
    return out;
}

} // namespace fxc
