#include "heis/coercive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heis/errors.hpp"
#include "heis/parallel.hpp"

namespace heis {

TestFunction TestFunction::constant() { return TestFunction(); }

TestFunction TestFunction::coordinate(int j) {
    if (j < 1) throw ConfigError("coordinate test function: j must be >= 1");
    TestFunction f;
    f.kind_ = Kind::Coordinate;
    f.j_ = j;
    f.name_ = "x_" + std::to_string(j);
    return f;
}

TestFunction TestFunction::oscillatory(int j, double omega) {
    TestFunction f = coordinate(j);
    f.kind_ = Kind::Oscillatory;
    f.a_ = omega;
    f.name_ = omega == 1.0 ? "sin(x_" + std::to_string(j) + ")"
                           : "sin(" + std::to_string(omega) + " x_" + std::to_string(j) + ")";
    return f;
}

TestFunction TestFunction::exp_decay() {
    TestFunction f;
    f.kind_ = Kind::ExpDecay;
    f.name_ = "exp(-N)";
    return f;
}

TestFunction TestFunction::radial_power(double a, double cutoff_radius) {
    if (!(a > 0.0) || !(cutoff_radius > 0.0)) throw ConfigError("radial_power: a and radius must be > 0");
    TestFunction f;
    f.kind_ = Kind::RadialPower;
    f.a_ = a;
    f.r_ = cutoff_radius;
    f.name_ = "N^" + std::to_string(a).substr(0, 4) + " cutoff";
    return f;
}

TestFunction TestFunction::radial_log() {
    TestFunction f;
    f.kind_ = Kind::RadialLog;
    f.name_ = "log(1+N)";
    return f;
}

TestFunction TestFunction::smooth_bump(Point center, double radius) {
    if (!(radius > 0.0)) throw ConfigError("smooth_bump: radius must be > 0");
    TestFunction f;
    f.kind_ = Kind::SmoothBump;
    f.r_ = radius;
    double c2 = center.t * center.t;
    for (double v : center.x) c2 += v * v;
    f.name_ = c2 == 0.0 ? "bump(origin)" : "bump(offset)";
    f.center_ = std::move(center);
    return f;
}

bool TestFunction::is_radial() const noexcept {
    return kind_ == Kind::ExpDecay || kind_ == Kind::RadialPower || kind_ == Kind::RadialLog;
}

FnEval TestFunction::evaluate(const Point& p, const NormEval* ne, const GroupParams& params) const {
    require_dimension(p, params);
    const std::size_t dim = params.horizontal_dim();
    FnEval out;
    out.grad.assign(dim, 0.0);
    if ((kind_ == Kind::Coordinate || kind_ == Kind::Oscillatory) && static_cast<std::size_t>(j_) > dim + 1) {
        throw DimensionError("coordinate test function index beyond 2n+1");
    }
    switch (kind_) {
        case Kind::Constant:
            out.value = 1.0;
            return out;
        case Kind::Coordinate:
        case Kind::Oscillatory: {
            const std::size_t j = static_cast<std::size_t>(j_ - 1);
            const double v = j < dim ? p.x[j] : p.t;
            double scale = 1.0;
            if (kind_ == Kind::Oscillatory) {
                out.value = std::sin(a_ * v);
                scale = a_ * std::cos(a_ * v);
            } else {
                out.value = v;
            }
            if (j < dim) {
                out.grad[j] = scale;
            } else {
                // X_k t = c_k(x)
                out.grad = field_coefficients(p, params);
                for (double& g : out.grad) g *= scale;
            }
            return out;
        }
        case Kind::ExpDecay:
        case Kind::RadialPower:
        case Kind::RadialLog: {
            if (ne == nullptr) throw ConfigError("radial test function needs the norm evaluation");
            const double N = ne->N;
            double d = 0.0;
            if (kind_ == Kind::ExpDecay) {
                out.value = std::exp(-N);
                d = -out.value;
            } else if (kind_ == Kind::RadialLog) {
                out.value = std::log1p(N);
                d = 1.0 / (1.0 + N);
            } else {
                const double cut = std::exp(-(N / r_) * (N / r_));
                out.value = std::pow(N, a_) * cut;
                d = (a_ * std::pow(N, a_ - 1.0) - 2.0 * std::pow(N, a_ + 1.0) / (r_ * r_)) * cut;
            }
            for (std::size_t k = 0; k < dim; ++k) out.grad[k] = d * ne->horiz_grad[k];
            return out;
        }
        case Kind::SmoothBump: {
            require_dimension(center_, params);
            double s2 = (p.t - center_.t) * (p.t - center_.t);
            for (std::size_t k = 0; k < dim; ++k) s2 += (p.x[k] - center_.x[k]) * (p.x[k] - center_.x[k]);
            s2 /= r_ * r_;
            if (s2 >= 1.0) return out;
            const double u = 1.0 - s2;
            out.value = std::exp(1.0 - 1.0 / u);
            // d f / d(s^2) = -f / u^2, d(s^2)/dp_k = 2 (p_k - c_k) / r^2
            const double dfds2 = -out.value / (u * u);
            std::vector<double> eg(dim + 1);
            for (std::size_t k = 0; k < dim; ++k) eg[k] = dfds2 * 2.0 * (p.x[k] - center_.x[k]) / (r_ * r_);
            eg[dim] = dfds2 * 2.0 * (p.t - center_.t) / (r_ * r_);
            out.grad = horizontal_apply(eg, p, params);
            return out;
        }
    }
    return out;
}

FnEval TestFunction::evaluate(const Point& p, const GroupParams& params) const {
    if (is_radial()) {
        const NormEval ne = exact_partials(p, params);
        return evaluate(p, &ne, params);
    }
    return evaluate(p, nullptr, params);
}

double TestFunction::value(const Point& p, const GroupParams& params) const {
    switch (kind_) {
        case Kind::ExpDecay:
            return std::exp(-norm_N(p, params));
        case Kind::RadialLog:
            return std::log1p(norm_N(p, params));
        case Kind::RadialPower: {
            const double N = norm_N(p, params);
            return std::pow(N, a_) * std::exp(-(N / r_) * (N / r_));
        }
        default:
            return evaluate(p, nullptr, params).value;
    }
}

std::vector<TestFunction> default_test_functions(const GroupParams& params) {
    Point off = Point::zero(params);
    off.x[0] = 3.0;
    return {TestFunction::constant(),
            TestFunction::coordinate(1),
            TestFunction::oscillatory(1, 1.0),
            TestFunction::exp_decay(),
            TestFunction::radial_power(1.0, 3.0),
            TestFunction::radial_log(),
            TestFunction::smooth_bump(Point::zero(params), 1.5),
            TestFunction::smooth_bump(off, 3.5)};
}

Observables compute_observables(const std::vector<TestFunction>& funcs, const SampleBatch& batch,
                                const GroupParams& params, unsigned threads) {
    const std::size_t m = batch.points.size();
    Observables obs;
    obs.N.assign(m, 0.0);
    obs.f.assign(funcs.size(), std::vector<double>(m, 0.0));
    obs.grad_norm.assign(funcs.size(), std::vector<double>(m, 0.0));
    const bool need_partials = std::any_of(funcs.begin(), funcs.end(), [](const TestFunction& f) { return f.is_radial(); });
    parallel_for_chunks(m, 4096, threads, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const Point& p = batch.points[i];
            NormEval ne;
            if (need_partials) {
                ne = exact_partials(p, params);
                obs.N[i] = ne.N;
            } else {
                obs.N[i] = norm_N(p, params);
            }
            for (std::size_t k = 0; k < funcs.size(); ++k) {
                const FnEval fe = funcs[k].evaluate(p, need_partials ? &ne : nullptr, params);
                double g2 = 0.0;
                for (double g : fe.grad) g2 += g * g;
                obs.f[k][i] = fe.value;
                obs.grad_norm[k][i] = std::sqrt(g2);
            }
        }
    });
    return obs;
}

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

void finish_terms(InequalityTerms& t, int batches) {
    t.lhs = batch_means(t.lhs_series, batches);
    t.grad = batch_means(t.grad_series, batches);
    t.mass = batch_means(t.mass_series, batches);
    // Means over every sample rather than the whole batches only.
    t.lhs.mean = mean_of(t.lhs_series);
    t.grad.mean = mean_of(t.grad_series);
    t.mass.mean = mean_of(t.mass_series);
}

void require_finite(const std::vector<double>& v, const std::string& what) {
    for (double x : v) {
        if (!std::isfinite(x)) throw ConfigError("non-finite observable in " + what);
    }
}

}  // namespace

std::vector<InequalityTerms> ubound_terms(const std::vector<TestFunction>& funcs, const MeasureSpec& spec,
                                          const Observables& obs, bool restrict_exterior, int batches) {
    spec.validate();
    const std::size_t m = obs.N.size();
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double N = obs.N[i];
        w[i] = (restrict_exterior && N < 1.0) ? 0.0 : eta(spec, N);
    }
    std::vector<InequalityTerms> out;
    for (std::size_t k = 0; k < funcs.size(); ++k) {
        InequalityTerms t;
        t.function = funcs[k].name();
        t.lhs_series.resize(m);
        t.grad_series.resize(m);
        t.mass_series.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double fq = std::pow(std::abs(obs.f[k][i]), spec.q);
            t.mass_series[i] = fq;
            t.lhs_series[i] = w[i] * fq;
            t.grad_series[i] = std::pow(obs.grad_norm[k][i], spec.q);
        }
        require_finite(t.lhs_series, t.function);
        require_finite(t.grad_series, t.function);
        finish_terms(t, batches);
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<InequalityTerms> lsi_terms(const std::vector<TestFunction>& funcs, const MeasureSpec& spec,
                                       const Observables& obs, int batches) {
    spec.validate();
    if (spec.family != Family::AlphaPowerP) throw ConfigError("log-Sobolev check needs the alpha-power family");
    const std::size_t m = obs.N.size();
    std::vector<InequalityTerms> out;
    for (std::size_t k = 0; k < funcs.size(); ++k) {
        InequalityTerms t;
        t.function = funcs[k].name();
        t.mass_series.resize(m);
        t.grad_series.resize(m);
        t.lhs_series.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            t.mass_series[i] = std::pow(std::abs(obs.f[k][i]), spec.q);
            t.grad_series[i] = std::pow(obs.grad_norm[k][i], spec.q);
        }
        const double mass = mean_of(t.mass_series);
        if (!(mass > 0.0)) throw ConfigError("log-Sobolev check: " + t.function + " has zero mass on the sample");
        for (std::size_t i = 0; i < m; ++i) {
            const double fq = t.mass_series[i];
            t.lhs_series[i] = fq > 0.0 ? fq * std::pow(std::abs(std::log(fq / mass)), spec.beta) : 0.0;
        }
        require_finite(t.lhs_series, t.function);
        finish_terms(t, batches);
        out.push_back(std::move(t));
    }
    return out;
}

FeasibilityResult fit_constants(const std::vector<InequalityTerms>& terms, int grid_points) {
    if (terms.size() < 3) throw ConfigError("fit_constants: need at least 3 test functions");
    if (grid_points < 2) throw ConfigError("fit_constants: need at least 2 grid points");
    const double eps = std::numeric_limits<double>::epsilon();
    bool has_constant = false;
    double d_lo = 0.0;
    double min_pos_ratio = std::numeric_limits<double>::infinity();
    for (const auto& t : terms) {
        if (t.mass.mean > 0.0 && t.lhs.mean > 0.0) min_pos_ratio = std::min(min_pos_ratio, t.lhs.mean / t.mass.mean);
        if (t.grad.mean == 0.0) {
            has_constant = true;
            if (t.mass.mean > 0.0) d_lo = std::max(d_lo, t.lhs.mean / t.mass.mean);
        }
    }
    if (!has_constant) throw ConfigError("fit_constants: the family must contain a constant function");
    if (!(d_lo > 0.0)) d_lo = std::isfinite(min_pos_ratio) ? min_pos_ratio : 1.0;
    d_lo *= 1.0 + 4.0 * eps;

    FeasibilityResult best;
    double best_sum = std::numeric_limits<double>::infinity();
    for (int g = 0; g < grid_points; ++g) {
        const double D = d_lo * std::pow(10.0, static_cast<double>(g) / (grid_points - 1));
        double C = 0.0;
        for (const auto& t : terms) {
            if (t.grad.mean > 0.0) C = std::max(C, (t.lhs.mean - D * t.mass.mean) / t.grad.mean);
        }
        C *= 1.0 + 4.0 * eps;
        best.frontier.push_back({C, D});
        if (C + D < best_sum) {
            best_sum = C + D;
            best.C = C;
            best.D = D;
        }
    }
    best.per_function_margins.clear();
    best.max_violation = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms) {
        const double margin = best.C * t.grad.mean + best.D * t.mass.mean - t.lhs.mean;
        best.per_function_margins.push_back(margin);
        if (-margin > best.max_violation) {
            best.max_violation = -margin;
            best.worst_function = t.function;
        }
    }
    best.feasible = best.max_violation <= 0.0;
    return best;
}

FeasibilityResult check_constants(const std::vector<InequalityTerms>& terms, double C, double D, double z,
                                  int batches, const std::vector<InequalityTerms>* fitted_on) {
    if (fitted_on != nullptr && fitted_on->size() != terms.size()) {
        throw ConfigError("check_constants: reference terms do not match");
    }
    auto combination = [&](const InequalityTerms& t) {
        std::vector<double> comb(t.lhs_series.size());
        for (std::size_t i = 0; i < comb.size(); ++i) {
            comb[i] = C * t.grad_series[i] + D * t.mass_series[i] - t.lhs_series[i];
        }
        return comb;
    };
    FeasibilityResult r;
    r.C = C;
    r.D = D;
    r.max_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const auto& t = terms[k];
        const std::vector<double> comb = combination(t);
        double se = batch_means(comb, batches).se;
        if (fitted_on != nullptr) se = std::hypot(se, batch_means(combination((*fitted_on)[k]), batches).se);
        const double margin = mean_of(comb) + z * se;
        r.per_function_margins.push_back(margin);
        if (-margin > r.max_violation) {
            r.max_violation = -margin;
            r.worst_function = t.function;
        }
    }
    r.feasible = r.max_violation <= 0.0;
    return r;
}

std::vector<PoincareRatio> poincare_ratios(const std::vector<TestFunction>& funcs, double q, const Observables& obs,
                                           int batches) {
    if (!(q >= 1.0)) throw ConfigError("poincare_ratios: q must be >= 1");
    std::vector<PoincareRatio> out;
    const std::size_t m = obs.N.size();
    for (std::size_t k = 0; k < funcs.size(); ++k) {
        if (funcs[k].is_constant()) continue;
        const double mf = mean_of(obs.f[k]);
        std::vector<double> a(m), b(m);
        for (std::size_t i = 0; i < m; ++i) {
            a[i] = std::pow(std::abs(obs.f[k][i] - mf), q);
            b[i] = std::pow(obs.grad_norm[k][i], q);
        }
        const double ma = mean_of(a), mb = mean_of(b);
        if (!(mb > 0.0)) throw ConfigError("poincare_ratios: " + funcs[k].name() + " has zero gradient on the sample");
        const double R = ma / mb;
        std::vector<double> z(m);
        for (std::size_t i = 0; i < m; ++i) z[i] = a[i] - R * b[i];
        out.push_back({funcs[k].name(), R, batch_means(z, batches).se / mb});
    }
    return out;
}

}  // namespace heis
