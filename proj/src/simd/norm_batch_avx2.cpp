// AVX2 variant of the batch norm kernel: four points per iteration, same
// operation order as detail::eval_full so results match the scalar variant
// bit for bit. Compiled with -mavx2 only (no FMA contraction).

#include <immintrin.h>

#include <cfloat>
#include <cmath>

#include "../norm_kernel.hpp"
#include "heis/simd/norm_batch.hpp"

namespace heis::simd {

namespace {

inline __m256d vabs(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }
inline __m256d vneg(__m256d v) { return _mm256_xor_pd(_mm256_set1_pd(-0.0), v); }
inline __m256d mul(__m256d a, __m256d b) { return _mm256_mul_pd(a, b); }
inline __m256d add(__m256d a, __m256d b) { return _mm256_add_pd(a, b); }
inline __m256d sub(__m256d a, __m256d b) { return _mm256_sub_pd(a, b); }
inline __m256d dvd(__m256d a, __m256d b) { return _mm256_div_pd(a, b); }
inline __m256d cst(double v) { return _mm256_set1_pd(v); }

void scalar_point(const PointCloud& cloud, std::size_t i, NormBatch& out) {
    const std::size_t count = cloud.size();
    const auto o = detail::eval_full(
        [&](std::size_t j) { return cloud.column(j)[i]; }, cloud.t()[i], cloud.params().n(),
        [&](std::size_t j, double v) { out.dN_dx[j * count + i] = v; });
    out.N[i] = o.N;
    out.dN_dt[i] = o.dN_dt;
    out.grad_norm_sq[i] = o.grad_norm_sq;
    out.x_dot_grad[i] = o.x_dot_grad;
    out.x_norm_sq[i] = o.x_norm_sq;
}

}  // namespace

void norm_batch_avx2(const PointCloud& cloud, std::size_t begin, std::size_t end,
                     NormBatch& out) {
    const std::size_t count = cloud.size();
    const int n = cloud.params().n();
    const std::size_t nn = static_cast<std::size_t>(n);
    const std::size_t dim = 2 * nn;
    const double dn = static_cast<double>(n);
    const double expo = 1.0 / (4.0 * n);
    const __m256d exp_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FF0000000000000LL));

    std::size_t i = begin;
    for (; i + 4 <= end; i += 4) {
        auto xj = [&](std::size_t j) { return _mm256_loadu_pd(cloud.column(j) + i); };
        const __m256d t = _mm256_loadu_pd(cloud.t() + i);

        __m256d m = _mm256_setzero_pd();
        for (std::size_t j = 0; j < dim; ++j) m = _mm256_max_pd(m, vabs(xj(j)));
        m = _mm256_max_pd(m, _mm256_sqrt_pd(vabs(t)));

        // Origin, subnormal scale or non-finite input: take the scalar path.
        const __m256d ok = _mm256_and_pd(_mm256_cmp_pd(m, cst(DBL_MIN), _CMP_GE_OQ),
                                         _mm256_cmp_pd(m, cst(DBL_MAX), _CMP_LE_OQ));
        if (_mm256_movemask_pd(ok) != 0xF) {
            for (std::size_t l = 0; l < 4; ++l) scalar_point(cloud, i + l, out);
            continue;
        }

        const __m256d s = _mm256_and_pd(m, exp_mask);
        const __m256d inv = dvd(cst(1.0), s);
        auto y = [&](std::size_t j) { return mul(xj(j), inv); };
        const __m256d tt = mul(mul(t, inv), inv);

        const __m256d y0 = y(0);
        const __m256d yn = y(nn);
        const __m256d P = add(mul(y0, y0), mul(yn, yn));
        __m256d S = _mm256_setzero_pd();
        for (std::size_t j = 1; j < nn; ++j) {
            const __m256d v = y(j);
            S = add(S, mul(v, v));
        }
        for (std::size_t j = nn + 1; j < dim; ++j) {
            const __m256d v = y(j);
            S = add(S, mul(v, v));
        }
        const __m256d A = mul(cst(0.5), add(P, S));
        const __m256d B = add(mul(cst(0.25), P), mul(cst(0.5), S));
        const __m256d t2 = mul(tt, tt);
        const __m256d r = _mm256_sqrt_pd(add(mul(B, B), t2));
        const __m256d W = add(add(mul(A, B), t2), mul(A, r));
        const __m256d K = dvd(W, mul(r, r));
        alignas(32) double kl[4];
        _mm256_store_pd(kl, K);
        for (double& v : kl) v = std::pow(v, expo);
        const __m256d q = _mm256_load_pd(kl);
        const __m256d sK = _mm256_sqrt_pd(K);
        const __m256d Br = add(B, r);
        const __m256d sBr = _mm256_sqrt_pd(Br);
        const __m256d N = dvd(dvd(mul(r, sK), q), sBr);

        const __m256d c4n = cst(4.0 * dn);
        const __m256d F =
            dvd(cst(1.0), mul(mul(mul(mul(mul(mul(c4n, r), r), r), sBr), sK), q));
        const __m256d half = cst(0.5);
        __m256d T1 = add(mul(mul(mul(half, B), B), A), mul(sub(B, mul(half, A)), t2));
        T1 = add(T1, mul(mul(mul(half, r), A), B));
        T1 = add(T1, mul(mul(mul(cst(dn - 1.0), r), r), Br));
        T1 = add(T1, mul(mul(mul(cst(dn), B), r), Br));
        const __m256d two = cst(2.0);
        __m256d T2 = add(mul(mul(A, B), r), mul(mul(A, B), B));
        T2 = add(T2, mul(sub(mul(two, B), A), t2));
        T2 = add(T2, mul(mul(mul(cst(2.0 * dn - 1.0), B), r), Br));
        T2 = sub(T2, mul(t2, r));
        __m256d inner = add(mul(mul(mul(two, B), B), B), mul(mul(two, t2), B));
        inner = add(inner, mul(mul(mul(two, B), B), r));
        inner = add(inner, mul(t2, r));
        const __m256d T3 = add(add(mul(mul(two, B), sub(A, B)), mul(A, r)),
                               dvd(mul(cst(2.0 * dn), inner), Br));
        const __m256d dtp = mul(mul(tt, F), T3);

        __m256d gns = _mm256_setzero_pd();
        __m256d xdg = _mm256_setzero_pd();
        __m256d ns = _mm256_setzero_pd();
        for (std::size_t j = 0; j < dim; ++j) {
            const __m256d yj = y(j);
            const __m256d T = (j == 0 || j == nn) ? T1 : T2;
            const __m256d dj = mul(mul(yj, F), T);
            __m256d cj;
            if (j == 0) cj = mul(cst(-0.5), y(nn));
            else if (j == nn) cj = mul(cst(0.5), y(0));
            else if (j < nn) cj = vneg(y(j + nn));
            else cj = y(j - nn);
            const __m256d hj = add(dj, mul(cj, dtp));
            gns = add(gns, mul(hj, hj));
            xdg = add(xdg, mul(yj, dj));
            ns = add(ns, mul(yj, yj));
            _mm256_storeu_pd(out.dN_dx.data() + j * count + i, dj);
        }
        _mm256_storeu_pd(out.N.data() + i, mul(N, s));
        _mm256_storeu_pd(out.dN_dt.data() + i, mul(dtp, inv));
        _mm256_storeu_pd(out.grad_norm_sq.data() + i, gns);
        _mm256_storeu_pd(out.x_dot_grad.data() + i, mul(xdg, s));
        _mm256_storeu_pd(out.x_norm_sq.data() + i, mul(mul(ns, s), s));
    }
    for (; i < end; ++i) scalar_point(cloud, i, out);
}

}  // namespace heis::simd
