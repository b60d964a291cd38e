#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace retailsim::stats {

class TooFewGroups : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};
class DegenerateVariance : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};
class UnbalancedGroups : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};
class BadDf : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct Group {
    std::string label;
    std::vector<double> values;
};
using GroupSamples = std::vector<Group>;

struct AnovaResult {
    double F = 0.0;
    int df_between = 0;
    int df_within = 0;
    double p = 1.0;
    double eta_squared = 0.0;
    double ss_between = 0.0;
    double ss_within = 0.0;
    double ss_total = 0.0;
    std::vector<double> group_means;
};

/// One-way between-groups ANOVA. Needs >= 2 groups with >= 2 observations
/// each; throws TooFewGroups or DegenerateVariance (zero within-group
/// variance).
AnovaResult anova_oneway(const GroupSamples& groups);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// P(F(df1, df2) > f). Throws BadDf for df < 1 or f < 0.
double f_upper_tail(double f, double df1, double df2);

/// CDF of the studentized range for k means and df error degrees of
/// freedom (df may be +infinity). Gauss-Legendre quadrature over the range
/// distribution and the chi scale; absolute error well below 1e-8 for
/// k <= 20.
double studentized_range_cdf(double q, int k, double df);
/// Upper-tail quantile: q such that P(Q > q) = alpha. Accurate to 1e-6.
double studentized_range_upper_quantile(double alpha, int k, double df);

struct TukeyPair {
    std::size_t a = 0;
    std::size_t b = 0;
    std::string label_a;
    std::string label_b;
    double mean_difference = 0.0;  // mean_b - mean_a
    double q = 0.0;
    double p_adjusted = 1.0;
    bool significant = false;
};

struct TukeyResult {
    std::vector<TukeyPair> pairs;  // (0,1), (0,2), ..., (k-2,k-1)
    double corrected_alpha = 0.05;
    double q_critical = 0.0;
    double mse = 0.0;
    int k = 0;
    int df_within = 0;
};

/// Tukey HSD for balanced groups. Throws UnbalancedGroups, TooFewGroups or
/// DegenerateVariance.
TukeyResult tukey_hsd(const GroupSamples& groups, double corrected_alpha);

/// Divides the family-wise alpha across the dependent variables.
double corrected_alpha(double family_alpha, int n_dependent_vars);

enum class EffectSize { Small, Medium, Large };
std::string_view to_string(EffectSize e);
/// Cohen's cutpoints: large >= 0.14, medium >= 0.06.
EffectSize effect_size_label(double eta_squared);

/// Spearman rank correlation with average ranks for ties.
double spearman_rho(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double sample_sd(std::span<const double> x);

}  // namespace retailsim::stats
