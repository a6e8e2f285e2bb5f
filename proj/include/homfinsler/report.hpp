#pragma once

#include <string>
#include <vector>

#include "homfinsler/obstruct.hpp"

namespace homfinsler {

/// Inner-product and coordinate convention, embedded in every report.
std::string convention_text(const CompactLieAlgebra& g);

std::string case_report_json(const CaseReport& report);
std::string all_cases_json(const std::vector<CaseReport>& reports);
std::string split_json(const ReductiveSplit& split, const std::string& case_id);
std::string algebra_json(const CompactLieAlgebra& g);
std::string curvature_json(const VeryStandardNorm& n, const Flag& flag, const CurvatureResult* result,
                           const std::string& error, double normal_K);

/// Writes through a temporary file in the same directory, then renames.
void write_atomically(const std::string& path, const std::string& content);

/// One-line human summary of a case run.
std::string case_summary_line(const CaseReport& report);

}  // namespace homfinsler
