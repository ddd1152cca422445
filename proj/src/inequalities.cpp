#include "heis/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "heis/errors.hpp"
#include "heis/norm.hpp"
#include "heis/parallel.hpp"
#include "heis/point_cloud.hpp"
#include "heis/sampling.hpp"
#include "heis/simd/norm_batch.hpp"

namespace heis {

namespace {

bool lex_less(const Point& a, const Point& b) {
    if (a.x != b.x) return std::lexicographical_compare(a.x.begin(), a.x.end(), b.x.begin(), b.x.end());
    return a.t < b.t;
}

struct Acc {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    Point worst;
    std::size_t count = 0;

    void add(double m, const PointCloud& cloud, std::size_t i) {
        ++count;
        max = std::max(max, m);
        if (m < min || std::isnan(m)) {
            min = std::isnan(m) ? -std::numeric_limits<double>::infinity() : m;
            worst = cloud.point(i);
        } else if (m == min) {
            Point p = cloud.point(i);
            if (lex_less(p, worst)) worst = std::move(p);
        }
    }

    void merge(const Acc& o) {
        if (o.count == 0) return;
        count += o.count;
        max = std::max(max, o.max);
        if (o.min < min || (o.min == min && (worst.x.empty() || lex_less(o.worst, worst)))) {
            min = o.min;
            worst = o.worst;
        }
    }
};

void fill_chunk(const GroupParams& params, const CloudSpec& spec, std::size_t c, std::size_t begin,
                PointCloud& cloud) {
    auto rng = make_rng(spec.seed, c);
    for (std::size_t k = 0; k < cloud.size(); ++k) {
        const std::size_t i = begin + k;
        const Point p = (i % 2 == 0) ? sample_box(rng, params, spec.box_half_width, spec.min_x_norm)
                                     : sample_log_radial(rng, params, spec.log10_min, spec.log10_max,
                                                         spec.min_x_norm);
        cloud.set_point(k, p);
    }
}

void validate(const CloudSpec& spec) {
    if (spec.chunk == 0) throw ConfigError("CloudSpec: chunk must be > 0");
    if (!(spec.box_half_width > 0.0)) throw ConfigError("CloudSpec: box_half_width must be > 0");
    if (!(spec.log10_min <= spec.log10_max)) throw ConfigError("CloudSpec: log10_min > log10_max");
    if (!(spec.min_x_norm > 0.0)) throw ConfigError("CloudSpec: min_x_norm must be > 0 (center line)");
    if (!(spec.tolerance >= 0.0)) throw ConfigError("CloudSpec: tolerance must be >= 0");
}

// Evaluates `names.size()` margins per point; visit(out, cloud, i, acc) adds
// to each accumulator.
using Visitor = std::function<void(const NormBatch&, const PointCloud&, std::size_t, std::vector<Acc>&)>;

std::vector<InequalityReport> sweep(const GroupParams& params, const CloudSpec& spec,
                                    const std::vector<std::string>& names, const Visitor& visit) {
    validate(spec);
    const std::size_t chunks = chunk_count(spec.n_points, spec.chunk);
    std::vector<std::vector<Acc>> per_chunk(chunks, std::vector<Acc>(names.size()));
    parallel_for_chunks(spec.n_points, spec.chunk, spec.threads,
                        [&](std::size_t c, std::size_t b, std::size_t e) {
                            PointCloud cloud(params, e - b);
                            fill_chunk(params, spec, c, b, cloud);
                            NormBatch out;
                            simd::norm_batch(cloud, out);
                            for (std::size_t i = 0; i < cloud.size(); ++i) visit(out, cloud, i, per_chunk[c]);
                        });
    std::vector<Acc> total(names.size());
    for (const auto& accs : per_chunk) {
        for (std::size_t k = 0; k < names.size(); ++k) total[k].merge(accs[k]);
    }
    std::vector<InequalityReport> reports;
    for (std::size_t k = 0; k < names.size(); ++k) {
        InequalityReport r;
        r.name = names[k];
        r.n_points = spec.n_points;
        r.min_margin = total[k].min;
        r.max_margin = total[k].max;
        r.worst_point = total[k].worst;
        r.tolerance = spec.tolerance;
        r.pass = total[k].count > 0 && r.min_margin >= -spec.tolerance;
        r.seed = spec.seed;
        reports.push_back(std::move(r));
    }
    return reports;
}

}  // namespace

std::vector<Point> make_cloud(const GroupParams& params, const CloudSpec& spec) {
    validate(spec);
    std::vector<Point> pts;
    pts.reserve(spec.n_points);
    const std::size_t chunks = chunk_count(spec.n_points, spec.chunk);
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t b = c * spec.chunk;
        const std::size_t e = std::min(spec.n_points, b + spec.chunk);
        PointCloud cloud(params, e - b);
        fill_chunk(params, spec, c, b, cloud);
        for (std::size_t i = 0; i < cloud.size(); ++i) pts.push_back(cloud.point(i));
    }
    return pts;
}

std::vector<InequalityReport> check_gradient_bounds(const GroupParams& params, const CloudSpec& spec) {
    const double n = params.n();
    const double lower = std::pow(2.0, -5.0 - 2.0 / n);
    const double upper = (2.0 * n + 1.0) * (2.0 * n + 1.0) / (8.0 * n * n);
    return sweep(params, spec, {"x_dot_grad_lower", "grad_norm_lower", "grad_norm_upper"},
                 [=](const NormBatch& o, const PointCloud& cloud, std::size_t i, std::vector<Acc>& acc) {
                     const double N = o.N[i];
                     const double x2 = o.x_norm_sq[i];
                     const double g = N * N * o.grad_norm_sq[i] / x2;
                     acc[0].add(N * o.x_dot_grad[i] / x2 + 1.0 / (4.0 * n), cloud, i);
                     acc[1].add(g - lower, cloud, i);
                     acc[2].add(upper - g, cloud, i);
                 });
}

std::vector<InequalityReport> check_intermediate_bounds(const GroupParams& params, const CloudSpec& spec) {
    const std::size_t nn = static_cast<std::size_t>(params.n());
    const double n = params.n();
    const double combined_other = (2.0 * n - 1.0) / (std::pow(2.0, 2.0 + 1.0 / n) * n);
    const double combined_pair = std::pow(2.0, -2.0 - 1.0 / n);
    const double partial_upper = (2.0 * n + 1.0) / (4.0 * n);
    const std::vector<std::string> names = {"pair_radial_sign",    "pair_partial_upper",  "other_radial_lower",
                                            "other_combined_lower", "pair_combined_lower", "other_partial_upper",
                                            "time_partial_upper"};
    return sweep(params, spec, names,
                 [=](const NormBatch& o, const PointCloud& cloud, std::size_t i, std::vector<Acc>& acc) {
                     const std::size_t count = cloud.size();
                     const double N = o.N[i];
                     const double dt = std::abs(o.dN_dt[i]);
                     for (std::size_t j = 0; j < 2 * nn; ++j) {
                         const double xj = cloud.column(j)[i];
                         if (xj == 0.0) continue;
                         const double dj = o.dN_dx[j * count + i];
                         const double radial = N * (dj / xj);  // N x_j dN_j / x_j^2
                         const double partial = N * std::abs(dj) / std::abs(xj);
                         if (j == 0 || j == nn) {
                             acc[0].add(radial, cloud, i);
                             acc[1].add(0.5 - partial, cloud, i);
                             acc[4].add(partial + 0.5 * N * dt - combined_pair, cloud, i);
                         } else {
                             acc[2].add(radial + 1.0 / (4.0 * n), cloud, i);
                             acc[3].add(partial + N * dt - combined_other, cloud, i);
                             acc[5].add(partial_upper - partial, cloud, i);
                         }
                     }
                     acc[6].add(partial_upper - N * dt, cloud, i);
                 });
}

double pair_partial_ratio_max_t0(const GroupParams& params, int samples) {
    if (samples < 1) throw ConfigError("pair_partial_ratio_max_t0: samples must be >= 1");
    double best = 0.0;
    for (int k = 1; k <= samples; ++k) {
        const double theta = 0.5 * std::numbers::pi * k / (samples + 1.0);
        Point p = Point::zero(params);
        p.x[0] = std::cos(theta);
        p.x[1] = std::sin(theta);
        const NormEval e = exact_partials(p, params);
        best = std::max(best, 2.0 * e.N * std::abs(e.dN_dx[0]) / std::abs(p.x[0]));
    }
    return best;
}

double constant_margin(int n) {
    if (n < 2) throw ConfigError("constant_margin: n must be >= 2");
    const double dn = n;
    return 1.0 - std::pow(2.0, 3.0 + 2.0 / dn) * ((2.0 * dn + 1.0) / (dn * dn)) *
                     (std::sqrt(dn + 1.0) / std::pow(dn - 1.0, 1.5));
}

double alpha_opt(int n) {
    if (n < 2) throw ConfigError("alpha_opt: n must be >= 2");
    const double dn = n;
    return (2.0 * dn + 1.0) / (4.0 * dn * std::sqrt(dn * dn - 1.0));
}

double ubound_f(double alpha, int n) {
    if (n < 2) throw ConfigError("ubound_f: n must be >= 2");
    if (!(alpha > 0.0)) throw ConfigError("ubound_f: alpha must be > 0");
    const double dn = n;
    return std::pow(2.0, -5.0 - 2.0 / dn) - alpha / (2.0 * dn) -
           (2.0 * dn + 1.0) * (2.0 * dn + 1.0) / (alpha * 32.0 * dn * dn * dn * (dn - 1.0) * (dn - 1.0)) -
           alpha / (dn * (dn - 1.0));
}

std::vector<ConstantsRow> constants_table(int n_min, int n_max) {
    if (n_min < 2 || n_max < n_min) throw ConfigError("constants_table: need 2 <= n_min <= n_max");
    std::vector<ConstantsRow> rows;
    for (int n = n_min; n <= n_max; ++n) {
        const double a = alpha_opt(n);
        rows.push_back({n, constant_margin(n), a, ubound_f(a, n)});
    }
    return rows;
}

}  // namespace heis
