#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "retailsim/experiments.hpp"
#include "retailsim/metrics.hpp"
#include "retailsim/stats.hpp"

namespace retailsim {

class MalformedCsv : public std::runtime_error {
  public:
    MalformedCsv(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Shortest text that parses back to exactly the same double.
std::string format_double(double v);
/// Fixed-point with `decimals` digits.
std::string format_fixed(double v, int decimals);
/// p-value style: four decimals without the leading zero (".0167"), or
/// "<.0001".
std::string format_p(double p);

// -- results.csv -----------------------------------------------------------
// Columns: level, rep, seed, then outcome_columns(). Absent values are
// empty fields.
void write_results_csv(std::ostream& os, const std::vector<ReplicationResult>& results);
std::string results_csv(const std::vector<ReplicationResult>& results);

/// Generic table read from a results file: the level column plus every
/// numeric column by name.
struct ResultTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::optional<double>>> rows;

    std::optional<std::size_t> column(const std::string& name) const;
};
/// Throws MalformedCsv.
ResultTable read_results_csv(std::istream& is);

// -- descriptives.csv -------------------------------------------------------
// level, n, then <col>_mean and <col>_sd per column, two decimals. A column
// with no values at a level has empty fields. sd_defined is false when a
// level has a single observation (SD printed as 0.00).
void write_descriptives_csv(std::ostream& os, const std::vector<LevelSummary>& summary,
                            const std::vector<std::string>& columns);

// -- anova.txt -------------------------------------------------------------
struct VariableAnalysis {
    std::string variable;
    std::optional<stats::AnovaResult> anova;
    std::optional<stats::TukeyResult> tukey;  // only when the ANOVA is significant
    std::string skipped;                      // reason when anova is absent
};

struct AnalysisReport {
    double family_alpha = 0.05;
    int family_size = 1;
    double corrected_alpha = 0.05;
    std::vector<std::string> levels;  // group labels in order
    std::size_t observations = 0;
    std::vector<VariableAnalysis> variables;
};

/// Groups by the level column (first-appearance order) and analyses each
/// dependent variable. Throws stats::TooFewGroups when fewer than two levels
/// are present, std::invalid_argument for unknown columns.
AnalysisReport analyse(const ResultTable& table, const std::vector<std::string>& dependent_vars,
                       double family_alpha, int family_size);

std::string format_report(const AnalysisReport& r);

}  // namespace retailsim
