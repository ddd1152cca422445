#include "heis/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "heis/errors.hpp"

namespace heis {

namespace {

// Kronrod 15-point abscissae (nonnegative half) and weights; the even-index
// nodes carry the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    int fn;  // which integrand
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const RealFunction& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::abs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

    const double value = resk * h;
    resabs *= std::abs(h);
    resasc *= std::abs(h);
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * resabs, err);
    }
    if (!std::isfinite(value) || !std::isfinite(err)) {
        throw QuadratureError("quadrature: non-finite integrand value on [" + std::to_string(a) + ", " +
                              std::to_string(b) + "]");
    }
    return {a, b, value, err, 0};
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0) && !(abs_tol > 0.0)) throw ConfigError("quadrature: need a positive tolerance");
    if (rel_tol < 0.0 || abs_tol < 0.0) throw ConfigError("quadrature: tolerances must be >= 0");
    if (max_subdivisions < 1) throw ConfigError("quadrature: max_subdivisions must be >= 1");
    if (!(split_point > 0.0)) throw ConfigError("quadrature: split_point must be > 0");
}

namespace {

struct Piece {
    const RealFunction* f;
    double a, b;
};

// Global adaptive refinement over several (integrand, interval) pieces that
// share one tolerance against the summed value.
QuadResult adapt(const std::vector<Piece>& pieces_in, const QuadratureConfig& cfg) {
    cfg.validate();
    std::priority_queue<Segment> heap;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i < pieces_in.size(); ++i) {
        Segment s = gk15(*pieces_in[i].f, pieces_in[i].a, pieces_in[i].b);
        s.fn = static_cast<int>(i);
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }
    int intervals = static_cast<int>(pieces_in.size());
    const double eps = std::numeric_limits<double>::epsilon();
    while (total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
        if (intervals >= cfg.max_subdivisions) {
            throw QuadratureError("quadrature: tolerance not reached within " +
                                  std::to_string(cfg.max_subdivisions) + " subdivisions (error estimate " +
                                  std::to_string(total_err) + ", value " + std::to_string(total) + ")");
        }
        const Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (std::abs(worst.b - worst.a) <= 4.0 * eps * std::max(std::abs(worst.a), std::abs(worst.b))) {
            throw QuadratureError("quadrature: interval collapsed near " + std::to_string(mid));
        }
        heap.pop();
        const RealFunction& f = *pieces_in[static_cast<std::size_t>(worst.fn)].f;
        Segment left = gk15(f, worst.a, mid);
        Segment right = gk15(f, mid, worst.b);
        left.fn = right.fn = worst.fn;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }
    // Re-sum from the pieces to shed the drift of the running updates.
    std::vector<Segment> segs;
    segs.reserve(heap.size());
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(),
              [](const Segment& l, const Segment& r) { return l.fn != r.fn ? l.fn < r.fn : l.a < r.a; });
    double sum = 0.0, err = 0.0;
    for (const Segment& s : segs) {
        sum += s.value;
        err += s.error;
    }
    return {sum, err, intervals};
}

}  // namespace

QuadResult integrate(const RealFunction& f, double a, double b, const QuadratureConfig& cfg) {
    return adapt({{&f, a, b}}, cfg);
}

QuadResult integrate_half_line(const RealFunction& f, const RealFunction& tail,
                               const QuadratureConfig& cfg) {
    cfg.validate();
    RealFunction g = tail;
    if (!g) {
        g = [&f](double v) { return f(1.0 / v) / (v * v); };
    }
    return adapt({{&f, 0.0, cfg.split_point}, {&g, 0.0, 1.0 / cfg.split_point}}, cfg);
}

}  // namespace heis

