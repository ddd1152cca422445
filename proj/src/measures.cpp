#include "heis/measures.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "heis/errors.hpp"
#include "heis/norm.hpp"

namespace heis {

MeasureSpec MeasureSpec::power(double k, double q) {
    MeasureSpec s;
    s.family = Family::PowerK;
    s.k = k;
    s.q = q;
    return s;
}

MeasureSpec MeasureSpec::cosh_power(double k, double q) {
    MeasureSpec s = power(k, q);
    s.family = Family::CoshPowerK;
    return s;
}

MeasureSpec MeasureSpec::power_log(double k, double q) {
    MeasureSpec s = power(k, q);
    s.family = Family::PowerKLog;
    return s;
}

MeasureSpec MeasureSpec::alpha_power(double alpha, double p, double beta, double q) {
    MeasureSpec s;
    s.family = Family::AlphaPowerP;
    s.alpha = alpha;
    s.p = p;
    s.beta = beta;
    s.q = q;
    return s;
}

void MeasureSpec::validate() const {
    if (!(q >= 2.0) || !std::isfinite(q)) throw ConfigError("measure: q must be >= 2");
    switch (family) {
        case Family::PowerK:
            if (!(k >= 4.0) || !std::isfinite(k)) throw ConfigError("power family needs k >= 4");
            return;
        case Family::CoshPowerK:
            if (!(k >= 1.0) || !std::isfinite(k)) throw ConfigError("cosh-power family needs k >= 1");
            return;
        case Family::PowerKLog:
            if (!(k >= 3.0) || !std::isfinite(k)) throw ConfigError("power-log family needs k >= 3");
            return;
        case Family::AlphaPowerP:
            if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha-power family needs alpha > 0");
            if (!(p >= 4.0) || !std::isfinite(p)) throw ConfigError("alpha-power family needs p >= 4");
            if (!(beta > 0.0) || beta > (p - 3.0) / p) {
                throw ConfigError("alpha-power family needs 0 < beta <= (p-3)/p");
            }
            return;
    }
}

const char* family_name(Family f) {
    switch (f) {
        case Family::PowerK:
            return "power";
        case Family::CoshPowerK:
            return "cosh-power";
        case Family::PowerKLog:
            return "power-log";
        case Family::AlphaPowerP:
            return "alpha-power";
    }
    return "unknown";
}

Family parse_family(const std::string& name) {
    if (name == "power") return Family::PowerK;
    if (name == "cosh-power") return Family::CoshPowerK;
    if (name == "power-log") return Family::PowerKLog;
    if (name == "alpha-power") return Family::AlphaPowerP;
    throw ConfigError("unknown measure family '" + name + "' (power, cosh-power, power-log, alpha-power)");
}

std::string MeasureSpec::label() const {
    std::ostringstream os;
    os << family_name(family);
    if (family == Family::AlphaPowerP) {
        os << "(alpha=" << alpha << ",p=" << p << ",beta=" << beta << ")";
    } else {
        os << "(k=" << k << ")";
    }
    os << " q=" << q;
    return os.str();
}

double g_value(const MeasureSpec& s, double N) {
    switch (s.family) {
        case Family::PowerK:
            return std::pow(N, s.k);
        case Family::CoshPowerK:
            return std::cosh(std::pow(N, s.k));
        case Family::PowerKLog:
            return std::pow(N, s.k) * std::log1p(N);
        case Family::AlphaPowerP:
            return s.alpha * std::pow(N, s.p);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double g_prime(const MeasureSpec& s, double N) {
    switch (s.family) {
        case Family::PowerK:
            return s.k * std::pow(N, s.k - 1.0);
        case Family::CoshPowerK:
            return s.k * std::pow(N, s.k - 1.0) * std::sinh(std::pow(N, s.k));
        case Family::PowerKLog:
            return s.k * std::pow(N, s.k - 1.0) * std::log1p(N) + std::pow(N, s.k) / (N + 1.0);
        case Family::AlphaPowerP:
            return s.alpha * s.p * std::pow(N, s.p - 1.0);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double g_second(const MeasureSpec& s, double N) {
    const double k = s.k;
    switch (s.family) {
        case Family::PowerK:
            return k * (k - 1.0) * std::pow(N, k - 2.0);
        case Family::CoshPowerK: {
            const double y = std::pow(N, k);
            return k * (k - 1.0) * std::pow(N, k - 2.0) * std::sinh(y) +
                   k * k * std::pow(N, 2.0 * k - 2.0) * std::cosh(y);
        }
        case Family::PowerKLog:
            return k * (k - 1.0) * std::pow(N, k - 2.0) * std::log1p(N) + 2.0 * k * std::pow(N, k - 1.0) / (N + 1.0) -
                   std::pow(N, k) / ((N + 1.0) * (N + 1.0));
        case Family::AlphaPowerP:
            return s.alpha * s.p * (s.p - 1.0) * std::pow(N, s.p - 2.0);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double g_curvature_ratio(const MeasureSpec& s, double N) {
    switch (s.family) {
        case Family::PowerK:
            return (s.k - 1.0) / (s.k * std::pow(N, s.k));
        case Family::CoshPowerK: {
            // (k-1) / (k y sinh y) + coth(y) / sinh(y), y = N^k
            const double y = std::pow(N, s.k);
            if (y > 700.0) return 0.0;
            const double sh = std::sinh(y);
            return (s.k - 1.0) / (s.k * y * sh) + 1.0 / (std::tanh(y) * sh);
        }
        case Family::PowerKLog: {
            const double g1 = g_prime(s, N);
            return g_second(s, N) / (g1 * g1);
        }
        case Family::AlphaPowerP:
            return (s.p - 1.0) / (s.p * s.alpha * std::pow(N, s.p));
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double eta(const MeasureSpec& s, double N) {
    switch (s.family) {
        case Family::PowerK:
            return s.k * std::pow(N, s.k - 3.0);
        case Family::CoshPowerK:
            return s.k * std::pow(N, s.k - 3.0) * std::sinh(std::pow(N, s.k));
        case Family::PowerKLog:
            return s.k * std::pow(N, s.k - 3.0) * std::log1p(N) + std::pow(N, s.k - 2.0) / (N + 1.0);
        case Family::AlphaPowerP:
            return s.alpha * s.p * std::pow(N, s.p - 3.0);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double log_density(const MeasureSpec& spec, const Point& p, const GroupParams& params) {
    return -g_value(spec, norm_N(p, params));
}

std::vector<double> grad_log_density(const MeasureSpec& spec, const Point& p, const GroupParams& params) {
    const NormEval e = exact_partials(p, params);
    const double gp = g_prime(spec, e.N);
    std::vector<double> g(e.dN_dx.size() + 1);
    for (std::size_t j = 0; j < e.dN_dx.size(); ++j) g[j] = -gp * e.dN_dx[j];
    g.back() = -gp * e.dN_dt;
    return g;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi >= lo) || count < 2) throw ConfigError("log_grid: need 0 < lo <= hi, count >= 2");
    std::vector<double> g(count);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i) g[i] = std::exp(a + (b - a) * i / (count - 1.0));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    if (!(hi >= lo) || count < 2) throw ConfigError("linear_grid: need lo <= hi, count >= 2");
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1.0);
    g.back() = hi;
    return g;
}

namespace {

struct GridAcc {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    double worst_N = std::numeric_limits<double>::quiet_NaN();

    void add(double m, double N) {
        if (std::isnan(m)) m = -std::numeric_limits<double>::infinity();
        if (m < min) {
            min = m;
            worst_N = N;
        }
        max = std::max(max, m);
    }

    InequalityReport report(const std::string& name, std::size_t n, double tol) const {
        InequalityReport r;
        r.name = name;
        r.n_points = n;
        r.min_margin = min;
        r.max_margin = max;
        r.worst_grid_value = worst_N;
        r.tolerance = tol;
        r.pass = n > 0 && min >= -tol;
        return r;
    }
};

}  // namespace

InequalityReport check_ubound_condition(const MeasureSpec& spec, const std::vector<double>& N_grid,
                                        double tolerance) {
    spec.validate();
    GridAcc acc;
    for (double N : N_grid) {
        if (!(N >= 1.0)) throw ConfigError("check_ubound_condition: grid must lie in [1, inf)");
        acc.add(1.0 - g_curvature_ratio(spec, N), N);
    }
    return acc.report("curvature_condition", N_grid.size(), tolerance);
}

std::vector<InequalityReport> check_lsi_conditions(const MeasureSpec& spec, const std::vector<double>& N_grid,
                                                   double c, double d, double tolerance) {
    spec.validate();
    if (spec.family != Family::AlphaPowerP) throw ConfigError("log-Sobolev conditions need the alpha-power family");
    if (!(c > 0.0) || !(d > 0.0)) throw ConfigError("check_lsi_conditions: c, d must be > 0");
    GridAcc inc, growth, curv;
    for (std::size_t i = 0; i < N_grid.size(); ++i) {
        const double N = N_grid[i];
        if (!(N >= 1.0)) throw ConfigError("check_lsi_conditions: grid must lie in [1, inf)");
        if (i + 1 < N_grid.size()) {
            const double a = g_prime(spec, N), b = g_prime(spec, N_grid[i + 1]);
            inc.add((b - a) / b, N);
        }
        const double gp = g_prime(spec, N);
        growth.add(std::log(c * gp / (N * N)) / spec.beta - std::log(g_value(spec, N)), N);
        curv.add(1.0 - g_curvature_ratio(spec, N) / d, N);
    }
    return {inc.report("derivative_increasing", N_grid.size() - 1, tolerance),
            growth.report("growth_bound", N_grid.size(), tolerance),
            curv.report("curvature_bound", N_grid.size(), tolerance)};
}

double lsi_min_c(const MeasureSpec& spec, const std::vector<double>& N_grid) {
    spec.validate();
    double c = 0.0;
    for (double N : N_grid) c = std::max(c, N * N * std::pow(g_value(spec, N), spec.beta) / g_prime(spec, N));
    return c;
}

double lsi_min_d(const MeasureSpec& spec) {
    spec.validate();
    if (spec.family != Family::AlphaPowerP) throw ConfigError("lsi_min_d: alpha-power family only");
    return (spec.p - 1.0) / (spec.p * spec.alpha);
}

}  // namespace heis
