#include "heis/sampling.hpp"

#include <cmath>

#include "heis/norm.hpp"

namespace heis {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

Point sample_box(std::mt19937_64& rng, const GroupParams& params, double half_width,
                 double min_x_norm) {
    std::uniform_real_distribution<double> u(-half_width, half_width);
    Point p = Point::zero(params);
    do {
        for (double& v : p.x) v = u(rng);
        p.t = u(rng);
    } while (std::sqrt(p.horizontal_norm_sq()) < min_x_norm);
    return p;
}

Point sample_log_radial(std::mt19937_64& rng, const GroupParams& params, double log10_min,
                        double log10_max, double min_x_norm) {
    Point p = sample_box(rng, params, 1.0, min_x_norm);
    std::uniform_real_distribution<double> e(log10_min, log10_max);
    return dilate(std::pow(10.0, e(rng)), p);
}

Point sample_on_sphere(std::mt19937_64& rng, const GroupParams& params, double target_N) {
    std::normal_distribution<double> g(0.0, 1.0);
    Point p = Point::zero(params);
    for (;;) {
        for (double& v : p.x) v = g(rng);
        p.t = g(rng);
        const double N = norm_N(p, params);
        if (N > 0.0 && std::sqrt(p.horizontal_norm_sq()) >= 1e-3 * N) {
            return dilate(target_N / N, p);
        }
    }
}

}  // namespace heis
