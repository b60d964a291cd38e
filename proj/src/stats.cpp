#include "retailsim/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace retailsim::stats {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 8> kGLx = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363,
};
constexpr std::array<double, 8> kGLw = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763,
};

template <class F>
double gauss_legendre(F&& f, double lo, double hi, int panels) {
    const double h = (hi - lo) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = lo + (p + 0.5) * h;
        double s = 0.0;
        for (std::size_t i = 0; i < kGLx.size(); ++i) s += kGLw[i] * f(mid + 0.5 * h * kGLx[i]);
        total += 0.5 * h * s;
    }
    return total;
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

// Lentz continued fraction for the incomplete beta.
double beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

// P(range of k iid N(0,1) <= w)
double normal_range_cdf(double w, int k) {
    if (w <= 0.0) return 0.0;
    auto f = [w, k](double z) {
        const double inner = norm_cdf(z) - norm_cdf(z - w);
        return norm_pdf(z) * std::pow(inner, k - 1);
    };
    const double r = k * gauss_legendre(f, -8.5, 8.5, 34);
    return std::clamp(r, 0.0, 1.0);
}

}  // namespace

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

AnovaResult anova_oneway(const GroupSamples& groups) {
    if (groups.size() < 2) throw TooFewGroups("ANOVA needs at least 2 groups, got " + std::to_string(groups.size()));
    std::size_t n_total = 0;
    double grand_sum = 0.0;
    for (const Group& g : groups) {
        if (g.values.size() < 2) {
            throw TooFewGroups("group '" + g.label + "' has fewer than 2 observations");
        }
        n_total += g.values.size();
        for (double v : g.values) grand_sum += v;
    }
    const double grand = grand_sum / static_cast<double>(n_total);

    AnovaResult r;
    for (const Group& g : groups) {
        const double m = mean(g.values);
        r.group_means.push_back(m);
        r.ss_between += static_cast<double>(g.values.size()) * (m - grand) * (m - grand);
        for (double v : g.values) {
            r.ss_within += (v - m) * (v - m);
            r.ss_total += (v - grand) * (v - grand);
        }
    }
    if (r.ss_within == 0.0) throw DegenerateVariance("within-group sum of squares is zero");

    r.df_between = static_cast<int>(groups.size()) - 1;
    r.df_within = static_cast<int>(n_total - groups.size());
    const double msb = r.ss_between / r.df_between;
    const double msw = r.ss_within / r.df_within;
    r.F = msb / msw;
    r.p = f_upper_tail(r.F, r.df_between, r.df_within);
    r.eta_squared = r.ss_total > 0.0 ? r.ss_between / r.ss_total : 0.0;
    return r;
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete_beta: a, b must be > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete_beta: x must lie in [0, 1]");
    if (x == 0.0 || x == 1.0) return x;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_upper_tail(double f, double df1, double df2) {
    if (!(df1 >= 1.0) || !(df2 >= 1.0)) throw BadDf("F distribution needs df1, df2 >= 1");
    if (!(f >= 0.0)) throw BadDf("F statistic must be >= 0");
    if (f == 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    // P(F > f) = I_{df2/(df2 + df1 f)}(df2/2, df1/2)
    const double x = df2 / (df2 + df1 * f);
    return incomplete_beta(0.5 * df2, 0.5 * df1, x);
}

double studentized_range_cdf(double q, int k, double df) {
    if (k < 2) throw std::invalid_argument("studentized range needs k >= 2");
    if (!(df >= 1.0)) throw BadDf("studentized range needs df >= 1");
    if (!(q > 0.0)) return 0.0;
    if (std::isinf(df) || df > 1e6) return normal_range_cdf(q, k);

    // s = sqrt(chi2_df / df); integrate over t = log s.
    const double sigma = 1.0 / std::sqrt(2.0 * df);
    const double lo = -std::max(45.0 / df, 12.0 * sigma);
    const double hi = std::max(12.0 * sigma, 0.5 * std::log1p(100.0 / df));
    const double log_norm =
        0.5 * df * std::log(0.5 * df) - std::lgamma(0.5 * df) + std::log(2.0);
    auto density_t = [&](double t) {
        // log of f_s(e^t) * e^t
        return std::exp(log_norm + df * t - 0.5 * df * std::exp(2.0 * t));
    };
    const int panels = static_cast<int>(std::ceil((hi - lo) / std::min(sigma, 0.5)));
    const double r = gauss_legendre(
        [&](double t) { return density_t(t) * normal_range_cdf(q * std::exp(t), k); }, lo, hi, panels);
    return std::clamp(r, 0.0, 1.0);
}

double studentized_range_upper_quantile(double alpha, int k, double df) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    const double target = 1.0 - alpha;
    auto g = [&](double q) { return studentized_range_cdf(q, k, df) - target; };

    double a = 0.0, fa = -target;
    double b = 4.0, fb = g(b);
    while (fb < 0.0) {
        a = b;
        fa = fb;
        b *= 2.0;
        fb = g(b);
        if (b > 1e4) throw std::runtime_error("studentized range quantile did not bracket");
    }
    // Illinois false position, finished by bisection when it stalls.
    int side = 0;
    for (int it = 0; it < 200 && b - a > 1e-9; ++it) {
        double c = (a * fb - b * fa) / (fb - fa);
        if (!(c > a && c < b)) c = 0.5 * (a + b);
        const double fc = g(c);
        if (std::abs(fc) < 1e-15) return c;
        if ((fc < 0.0) == (fa < 0.0)) {
            a = c;
            fa = fc;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            b = c;
            fb = fc;
            if (side == 1) fa *= 0.5;
            side = 1;
        }
    }
    return 0.5 * (a + b);
}

TukeyResult tukey_hsd(const GroupSamples& groups, double alpha) {
    if (groups.size() < 2) throw TooFewGroups("Tukey HSD needs at least 2 groups");
    const std::size_t n = groups.front().values.size();
    for (const Group& g : groups) {
        if (g.values.size() != n) throw UnbalancedGroups("Tukey HSD requires equal group sizes");
    }
    const AnovaResult a = anova_oneway(groups);

    TukeyResult r;
    r.corrected_alpha = alpha;
    r.k = static_cast<int>(groups.size());
    r.df_within = a.df_within;
    r.mse = a.ss_within / a.df_within;
    r.q_critical = studentized_range_upper_quantile(alpha, r.k, a.df_within);
    const double se = std::sqrt(r.mse / static_cast<double>(n));
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            TukeyPair p;
            p.a = i;
            p.b = j;
            p.label_a = groups[i].label;
            p.label_b = groups[j].label;
            p.mean_difference = a.group_means[j] - a.group_means[i];
            p.q = std::abs(p.mean_difference) / se;
            p.p_adjusted = 1.0 - studentized_range_cdf(p.q, r.k, a.df_within);
            p.significant = p.q > r.q_critical;
            r.pairs.push_back(std::move(p));
        }
    }
    return r;
}

double corrected_alpha(double family_alpha, int n_dependent_vars) {
    if (!(family_alpha > 0.0 && family_alpha < 1.0)) throw std::invalid_argument("family alpha must lie in (0, 1)");
    if (n_dependent_vars < 1) throw std::invalid_argument("need at least one dependent variable");
    return family_alpha / n_dependent_vars;
}

std::string_view to_string(EffectSize e) {
    switch (e) {
        case EffectSize::Small: return "small";
        case EffectSize::Medium: return "medium";
        case EffectSize::Large: return "large";
    }
    return "?";
}

EffectSize effect_size_label(double eta2) {
    if (!(eta2 >= 0.0 && eta2 <= 1.0)) throw std::invalid_argument("eta squared must lie in [0, 1]");
    if (eta2 >= 0.14) return EffectSize::Large;
    if (eta2 >= 0.06) return EffectSize::Medium;
    return EffectSize::Small;
}

namespace {
std::vector<double> ranks(std::span<const double> x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return x[i] < x[j]; });
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t m = i; m <= j; ++m) r[idx[m]] = avg;
        i = j + 1;
    }
    return r;
}
}  // namespace

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman_rho needs two equal-length samples of size >= 2");
    const auto rx = ranks(x), ry = ranks(y);
    const double mx = mean(rx), my = mean(ry);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace retailsim::stats
