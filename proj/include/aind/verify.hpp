#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aind/measure.hpp"

namespace aind {

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string expected;
    std::string computed;
    std::string tolerance;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    /// Only criteria whose "NN name" line contains this substring run.
    std::string filter;
    /// Upper end of the exact alpha / cov_sup range in the AI-3 criterion.
    unsigned alpha_n_max = 4;
};

/// The n = 3 binary-coding joint compared with the printed display: column
/// i = 0..5, row j counted from the bottom.
CriterionResult check_matrix_reproduction(const JointMeasure& joint);

/// Runs the acceptance suite. Exceptions inside a criterion become a failed
/// line; the remaining criteria still run.
std::vector<CriterionResult> verify_paper(const VerifyOptions& options = {});

std::string format_result(const CriterionResult& r);

/// 0 when every criterion passed, 3 otherwise.
int verify_exit_code(const std::vector<CriterionResult>& results);

}  // namespace aind
