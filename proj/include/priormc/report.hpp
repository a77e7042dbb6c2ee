#pragma once

// Persistence for sweep results: record/curve CSV files, matrix dumps and
// minimal hand-emitted SVG line plots (one polyline per algorithm/parameter).

#include "priormc/experiments.hpp"

#include <string>
#include <vector>

namespace priormc {

std::string records_to_csv(const std::vector<TrialRecord>& records);
std::string curves_to_csv(const std::vector<CurvePoint>& curves);
std::string certify_to_csv(const std::vector<CertifyRecord>& records);

void write_text_file(const std::string& path, const std::string& content);
void write_matrix_csv(const Mat& M, const std::string& path);

/// Success rate vs sampling rate (or measurement count), one polyline per
/// (algorithm, parameter) curve, with axes and a legend.
std::string curves_to_svg(const std::vector<CurvePoint>& curves, const std::string& title);

}  // namespace priormc
