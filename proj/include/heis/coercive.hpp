#pragma once

// Monte Carlo checks of the coercive inequalities on a finite family of test
// functions:
//   U-bound     mu(eta |f|^q) <= C mu|grad f|^q + D mu|f|^q,  eta = g'(N)/N^2
//   q-Poincare  mu|f - mu f|^q <= c mu|grad f|^q
//   beta-LSI    mu(|f|^q |log(|f|^q / mu|f|^q)|^beta) <= C mu|grad f|^q + D mu|f|^q
// A finite family only gives necessary conditions; the fitted constants are
// properties of the family and the sample.

#include <string>
#include <vector>

#include "heis/group.hpp"
#include "heis/mcmc.hpp"
#include "heis/measures.hpp"
#include "heis/norm.hpp"

namespace heis {

struct FnEval {
    double value = 0.0;
    std::vector<double> grad;  // X_j f
};

class TestFunction {
public:
    enum class Kind {
        Constant,     // f = 1
        Coordinate,   // f = x_j (j = 1..2n), or t for j = 2n+1
        Oscillatory,  // f = sin(omega x_j)
        ExpDecay,     // f = exp(-N)
        RadialPower,  // f = N^a exp(-(N/R)^2)
        RadialLog,    // f = log(1 + N)
        SmoothBump,   // f = exp(1 - 1/(1 - s^2)) for s < 1, s = |p - center| / radius (Euclidean)
    };

    static TestFunction constant();
    static TestFunction coordinate(int j);
    static TestFunction oscillatory(int j, double omega);
    static TestFunction exp_decay();
    static TestFunction radial_power(double a, double cutoff_radius);
    static TestFunction radial_log();
    static TestFunction smooth_bump(Point center, double radius);

    Kind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    bool is_constant() const noexcept { return kind_ == Kind::Constant; }
    /// Whether evaluation needs N and grad N.
    bool is_radial() const noexcept;

    /// `ne` must be exact_partials(p) when is_radial(); ignored otherwise.
    FnEval evaluate(const Point& p, const NormEval* ne, const GroupParams& params) const;
    FnEval evaluate(const Point& p, const GroupParams& params) const;
    double value(const Point& p, const GroupParams& params) const;

private:
    Kind kind_ = Kind::Constant;
    std::string name_ = "constant";
    int j_ = 1;
    double a_ = 1.0;
    double r_ = 1.0;
    Point center_;
};

/// constant, x_1, sin(x_1), exp(-N), N exp(-(N/3)^2), log(1+N), bump at the
/// origin (radius 1.5), bump at (3 e_1; 0) (radius 3.5).
std::vector<TestFunction> default_test_functions(const GroupParams& params);

/// Per-sample values of f and |grad f| for every function; rows by function.
struct Observables {
    std::vector<double> N;
    std::vector<std::vector<double>> f;
    std::vector<std::vector<double>> grad_norm;
};

Observables compute_observables(const std::vector<TestFunction>& funcs, const SampleBatch& batch,
                                const GroupParams& params, unsigned threads = 1);

struct InequalityTerms {
    std::string function;
    MeanEstimate lhs;   // U-bound: mu(eta |f|^q); LSI: entropy term
    MeanEstimate grad;  // mu |grad f|^q
    MeanEstimate mass;  // mu |f|^q
    std::vector<double> lhs_series, grad_series, mass_series;
};

/// restrict_exterior: weight eta only on {N >= 1}.
std::vector<InequalityTerms> ubound_terms(const std::vector<TestFunction>& funcs, const MeasureSpec& spec,
                                          const Observables& obs, bool restrict_exterior = false,
                                          int batches = 50);

/// Entropy term computed with the plug-in mu|f|^q from the same sample.
std::vector<InequalityTerms> lsi_terms(const std::vector<TestFunction>& funcs, const MeasureSpec& spec,
                                       const Observables& obs, int batches = 50);

struct FeasibilityPoint {
    double C = 0.0;
    double D = 0.0;
};

struct FeasibilityResult {
    double C = 0.0;
    double D = 0.0;
    double max_violation = 0.0;        // max_i lhs_i - C grad_i - D mass_i
    std::vector<double> per_function_margins;  // C grad_i + D mass_i - lhs_i
    std::string worst_function;
    bool feasible = false;
    std::vector<FeasibilityPoint> frontier;  // (C(D), D) over the D grid
};

/// For each D on a 200-point log grid over [D_lo, 10 D_lo], the least C with
/// lhs_i <= C grad_i + D mass_i for all i; D_lo is the largest lhs_i / mass_i
/// among functions with zero gradient (E[eta] for the constant), or the
/// smallest positive lhs_i / mass_i if there is none. Picks the grid point
/// minimising C + D. Throws ConfigError with fewer than 3 functions or
/// without the constant.
FeasibilityResult fit_constants(const std::vector<InequalityTerms>& terms, int grid_points = 200);

/// Rechecks (C, D) on independent terms: margin_i = C grad_i + D mass_i -
/// lhs_i + z * SE_i, SE from batch means of the per-sample combination. When
/// `fitted_on` (the terms the constants came from) is given, SE_i combines
/// the standard errors of both samples.
FeasibilityResult check_constants(const std::vector<InequalityTerms>& terms, double C, double D, double z = 3.0,
                                  int batches = 50, const std::vector<InequalityTerms>* fitted_on = nullptr);

struct PoincareRatio {
    std::string function;
    double ratio = 0.0;
    double se = 0.0;
};

/// mu|f - mu f|^q / mu|grad f|^q for every non-constant function. Throws
/// ConfigError if a supplied function has zero gradient everywhere.
std::vector<PoincareRatio> poincare_ratios(const std::vector<TestFunction>& funcs, double q, const Observables& obs,
                                           int batches = 50);

}  // namespace heis
