#pragma once

// Density families d mu = exp(-g(N)) / Z d lambda and the pointwise
// conditions on g used by the coercive inequalities. Z is never computed.

#include <string>
#include <vector>

#include "heis/group.hpp"
#include "heis/inequalities.hpp"

namespace heis {

enum class Family {
    PowerK,       // g = N^k,             k >= 4
    CoshPowerK,   // g = cosh(N^k),       k >= 1
    PowerKLog,    // g = N^k log(N + 1),  k >= 3
    AlphaPowerP,  // g = alpha N^p,       p >= 4, alpha > 0, 0 < beta <= (p-3)/p
};

struct MeasureSpec {
    Family family = Family::PowerK;
    double k = 4.0;      // PowerK, CoshPowerK, PowerKLog
    double alpha = 1.0;  // AlphaPowerP
    double p = 4.0;      // AlphaPowerP
    double q = 2.0;      // inequality exponent, >= 2
    double beta = 0.25;  // log-Sobolev order, AlphaPowerP only

    static MeasureSpec power(double k, double q = 2.0);
    static MeasureSpec cosh_power(double k, double q = 2.0);
    static MeasureSpec power_log(double k, double q = 2.0);
    static MeasureSpec alpha_power(double alpha, double p, double beta, double q = 2.0);

    /// Throws ConfigError when parameters are outside the family's range.
    void validate() const;
    std::string label() const;
};

const char* family_name(Family f);
/// "power", "cosh-power", "power-log", "alpha-power"; throws ConfigError otherwise.
Family parse_family(const std::string& name);

double g_value(const MeasureSpec& spec, double N);
double g_prime(const MeasureSpec& spec, double N);
double g_second(const MeasureSpec& spec, double N);

/// g''(N) / g'(N)^2, evaluated without overflow for large N.
double g_curvature_ratio(const MeasureSpec& spec, double N);

/// eta = g'(N) / N^2, the U-bound weight.
double eta(const MeasureSpec& spec, double N);

/// -g(N(p)).
double log_density(const MeasureSpec& spec, const Point& p, const GroupParams& params);

/// Euclidean gradient -g'(N) (dN/dx_1, ..., dN/dx_2n, dN/dt). Throws
/// SingularPointError when x = 0.
std::vector<double> grad_log_density(const MeasureSpec& spec, const Point& p, const GroupParams& params);

/// `count` points from lo to hi, evenly spaced in log N.
std::vector<double> log_grid(double lo, double hi, std::size_t count);
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

/// g'' <= g'^2 on the grid; margin 1 - g''/g'^2 ("curvature_condition").
InequalityReport check_ubound_condition(const MeasureSpec& spec, const std::vector<double>& N_grid,
                                        double tolerance = 1e-12);

/// Conditions for the beta-log-Sobolev route (AlphaPowerP only), in order:
///   "derivative_increasing": (g'(N_{i+1}) - g'(N_i)) / g'(N_{i+1})
///   "growth_bound":          (1/beta) log(c g'/N^2) - log g
///   "curvature_bound":       1 - g'' / (d g'^2)
std::vector<InequalityReport> check_lsi_conditions(const MeasureSpec& spec, const std::vector<double>& N_grid,
                                                   double c, double d, double tolerance = 1e-12);

/// Smallest c with g <= (c g'/N^2)^{1/beta} on the grid: max N^2 g^beta / g'.
double lsi_min_c(const MeasureSpec& spec, const std::vector<double>& N_grid);

/// (p - 1) / (p alpha): the smallest d with g'' <= d g'^2 on N >= 1.
double lsi_min_d(const MeasureSpec& spec);

}  // namespace heis
