#pragma once

// Integral representation of the fundamental solution of the sub-Laplacian
// and the closed forms it reduces to.
//
// After u = csch(tau/2) the solution is
//   u(x, t) = Gamma(n) / (2 pi)^n * Re J,
//   J = int_0^inf u^{2n-2} / (A u^2 + 2B - 2 i t sqrt(1 + u^2))^n du,
// and the closed form is
//   u(x, t) = K_n (B + r)^n / (r W^{n - 1/2}),  r = sqrt(B^2 + t^2),
//   W = AB + t^2 + A r,  K_n = prod_{k=3}^n (2k - 3) / (2 pi^{n-1} 2^{2n}).

#include <complex>
#include <cstdint>

#include "heis/group.hpp"
#include "heis/quadrature.hpp"

namespace heis {

/// Integration path for J.
enum class Contour {
    /// u(s) = csch((s + i)/2), s in [0, inf): the tau-path shifted by +i.
    /// Singularities of the integrand lie on the imaginary u-axis beyond the
    /// shifted path, so Re J is unchanged. Well conditioned for |t| of order
    /// A and above; for |t| << A the phase winds and Re J cancels.
    Shifted,
    /// u in [0, inf) literally. Loses up to ~26 digits to cancellation when
    /// |t| is large against A; exact-sign integrand at t = 0.
    RealAxis,
    /// RealAxis for |t| <= 0.3 A, Shifted otherwise; on non-convergence the
    /// other path is tried. The shifted path cancels badly when |t| << A and
    /// n is large, the real axis when |t| >~ A.
    Auto,
};

struct BggEval {
    double u_quad = 0.0;
    double u_closed = 0.0;
    double I1 = 0.0;
    double I2 = 0.0;
    double I = 0.0;
    double im_alpha_sq = 0.0;
};

/// (tau/2) csch(tau/2) * (tau csch tau)^{n-1}; 1 at tau = 0.
double v_of_tau(double tau, int n);

/// tau coth(tau/2) (A - B) + tau coth(tau) (2B - A) - i t tau; A at tau = 0.
std::complex<double> f_phase(double A, double B, double t, double tau);

/// pi / (4 A sqrt(W)). Throws SingularPointError for A <= 0.
double i1_closed(double A, double B, double t);

/// W / A^2. The roots of A^2 z^4 + (4AB + 4t^2) z^2 + 4B^2 + 4t^2 are
/// +-i a, +-i b (purely imaginary because A <= 2B); this is ((a + b)/2)^2,
/// the quantity that makes I1 = pi / (4 A^2 Im alpha) with the residues at
/// i a and i b.
double im_alpha_sq(double A, double B, double t);

/// pi (B + r)^2 / (8 r W^{3/2}).
double i_closed(double A, double B, double t);

/// int_0^inf u^2 / ((A u^2 + 2B)^2 + 4 t^2 (1 + u^2)) du.
double i1_quad(double A, double B, double t, const QuadratureConfig& cfg);

/// int_0^inf 8 t^2 (1 + u^2) u^2 / ((A u^2 + 2B)^2 + 4 t^2 (1 + u^2))^2 du.
double i2_quad(double A, double B, double t, const QuadratureConfig& cfg);

/// Re int_0^inf u^2 / (A u^2 + 2B - 2 i t sqrt(1 + u^2))^2 du.
double i_quad(double A, double B, double t, const QuadratureConfig& cfg,
              Contour contour = Contour::Auto);

/// Re J for general n (see header comment).
double j_integral(double A, double B, double t, int n, const QuadratureConfig& cfg,
                  Contour contour = Contour::Auto);

/// Gamma(n) / (2 pi)^n Re J. Throws SingularPointError when x = 0.
double u_quad(const Point& p, const GroupParams& params, const QuadratureConfig& cfg,
              Contour contour = Contour::Auto);

/// Closed form; throws SingularPointError at the origin.
double u_closed(const Point& p, const GroupParams& params);

/// prod_{k=3}^n (2k - 3) / (2 pi^{n-1} 2^{2n}).
double fundamental_constant(int n);

/// (n - 1)! as an exact integer product; n <= 20.
double gamma_int(int n);

BggEval bgg_evaluate(const Point& p, const GroupParams& params, const QuadratureConfig& cfg);

struct BggComparison {
    int n = 0;
    std::size_t points = 0;
    double max_rel_err = 0.0;
    double mean_rel_err = 0.0;
    Point worst_point;
};

/// Seeded points with |x| uniform in [0.1, 5] (random direction) and t
/// uniform in [-25, 25]; compares u_quad against u_closed. Deterministic in
/// (n, points, seed) regardless of `threads`.
BggComparison bgg_compare(const GroupParams& params, std::size_t points, std::uint64_t seed,
                          const QuadratureConfig& cfg, unsigned threads = 1);

}  // namespace heis
