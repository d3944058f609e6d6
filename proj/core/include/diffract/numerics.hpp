#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace diffract {

/// Budget for deterministic quadrature. nodes_per_axis drives fixed
/// Gauss-Legendre rules; the adaptive integrator bisects panels until the
/// summed error estimate falls below adaptive_tolerance (relative) or a
/// panel reaches bisection depth max_subdivisions.
struct QuadratureSpec {
    int nodes_per_axis = 64;
    double adaptive_tolerance = 1e-10;
    int max_subdivisions = 12;
};

/// Budget for the Monte Carlo integrator. Estimates are bit-identical for
/// equal (seed, sample_count) on every platform: the sample stream is
/// counter-based and the accumulation order is fixed.
struct McSpec {
    std::uint64_t sample_count = 1;
    std::uint64_t seed = 0;
};

/// Bessel function of the first kind, order 1. Odd total function,
/// |error| <= 1e-12 for |x| <= 50. Power series below |x| = 9, Miller
/// downward recurrence with the even-order normalization sum above.
double bessel_j1(double x);

/// sin(x)/x with the removable singularity handled:
/// |x| < 1e-8 returns 1 - x^2/6.
double sinc(double x);

/// Standard normal CDF (via erfc).
double normal_cdf(double x);

/// Inverse of normal_cdf on (0,1). Bisection refined by Newton; accurate to
/// ~1e-14, which is far below any tolerance used here.
double normal_quantile(double prob);

/// Gauss-Legendre rule on [-1,1]. Nodes by Newton iteration on P_n.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int n);

/// Fixed (non-adaptive) Gauss-Legendre integral of f over [a,b].
template <class F>
double integrate_fixed_gl(F&& f, double a, double b, const GaussLegendreRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

struct QuadResult {
    double value = 0.0;
    double error_bound = 0.0;
    bool converged = true;  // false when the subdivision budget ran out first
    int panels = 1;
};

namespace detail {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK DQK15 tables).
inline constexpr double kKronrodNodes[8] = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
inline constexpr double kGaussWeights[4] = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020};

struct PanelEstimate {
    double kronrod = 0.0;
    double err = 0.0;
};

// One G7/K15 pass over [a,b] with the QUADPACK scale-aware error estimate.
template <class F>
PanelEstimate gauss_kronrod_15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    fv[14] = f(mid);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        fv[2 * i] = f(mid + dx);
        fv[2 * i + 1] = f(mid - dx);
    }

    double k15 = kKronrodWeights[7] * fv[14];
    double g7 = kGaussWeights[3] * fv[14];
    for (int i = 0; i < 7; ++i) {
        const double pair = fv[2 * i] + fv[2 * i + 1];
        k15 += kKronrodWeights[i] * pair;
        if (i % 2 == 1) g7 += kGaussWeights[i / 2] * pair;
    }
    k15 *= half;
    g7 *= half;

    // resasc-style scaling keeps the estimate meaningful for both smooth
    // and spiky integrands.
    const double mean = k15 / (b - a);
    double resasc = kKronrodWeights[7] * std::fabs(fv[14] - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kKronrodWeights[i] *
                  (std::fabs(fv[2 * i] - mean) + std::fabs(fv[2 * i + 1] - mean));
    resasc *= std::fabs(half);

    double err = std::fabs(k15 - g7);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    return {k15, err};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration over [a,b]. Deterministic for a fixed
/// spec: the worst panel (first index on ties) is bisected until the summed
/// error estimate meets spec.adaptive_tolerance relative to the running
/// value (or the optional absolute floor), or every offending panel has
/// reached depth spec.max_subdivisions (then converged = false and the best
/// estimate is still returned).
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec = {},
                              double absolute_tolerance = 0.0) {
    struct Panel {
        double a, b, value, err;
        int depth;
    };
    auto first = detail::gauss_kronrod_15(f, a, b);
    std::vector<Panel> panels{{a, b, first.kronrod, first.err, 0}};

    const std::size_t panel_cap = 1u << 18;
    for (;;) {
        double total = 0.0, err = 0.0;
        for (const Panel& p : panels) {
            total += p.value;
            err += p.err;
        }
        const double tol =
            std::max(spec.adaptive_tolerance * std::max(std::fabs(total), 1e-300),
                     absolute_tolerance);
        if (err <= tol)
            return {total, err, true, static_cast<int>(panels.size())};

        std::size_t worst = panels.size();
        double worst_err = 0.0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            if (panels[i].depth < spec.max_subdivisions && panels[i].err > worst_err) {
                worst_err = panels[i].err;
                worst = i;
            }
        }
        if (worst == panels.size() || panels.size() >= panel_cap)
            return {total, err, false, static_cast<int>(panels.size())};

        const Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        auto left = detail::gauss_kronrod_15(f, p.a, mid);
        auto right = detail::gauss_kronrod_15(f, mid, p.b);
        panels[worst] = {p.a, mid, left.kronrod, left.err, p.depth + 1};
        panels.push_back({mid, p.b, right.kronrod, right.err, p.depth + 1});
    }
}

/// Non-template entry point for the adaptive integrator.
QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec = {});

/// Counter-based uniform stream: sample i is SplitMix64 applied to
/// seed + i * golden gamma, mapped to [0,1) from the top 53 bits. The value
/// at an index never depends on other indices, so any evaluation order
/// (including parallel) reproduces the same stream.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    double uniform(std::uint64_t index) const {
        std::uint64_t z = seed_ + (index + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t seed_;
};

/// Axis-aligned sampling region of known measure.
struct BoxRegion {
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    double measure() const { return (x1 - x0) * (y1 - y0); }
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct McComplexEstimate {
    std::complex<double> value;
    double std_error_re = 0.0;
    double std_error_im = 0.0;
};

namespace detail {

struct KahanSum {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

}  // namespace detail

/// Plain Monte Carlo integral of f over the box. Unbiased; std_error is the
/// sample standard deviation of the integrand scaled by measure / sqrt(N).
/// Bit-identical for a fixed (seed, sample_count).
template <class F>
McEstimate integrate_2d_mc(F&& f, const BoxRegion& box, const McSpec& spec) {
    CounterRng rng(spec.seed);
    detail::KahanSum sum, sum_sq;
    for (std::uint64_t i = 0; i < spec.sample_count; ++i) {
        const double x = box.x0 + (box.x1 - box.x0) * rng.uniform(2 * i);
        const double y = box.y0 + (box.y1 - box.y0) * rng.uniform(2 * i + 1);
        const double v = f(x, y);
        sum.add(v);
        sum_sq.add(v * v);
    }
    const double n = static_cast<double>(spec.sample_count);
    const double mean = sum.sum / n;
    double var = 0.0;
    if (spec.sample_count > 1) var = std::max(0.0, (sum_sq.sum / n - mean * mean) * n / (n - 1.0));
    return {box.measure() * mean, box.measure() * std::sqrt(var / n)};
}

/// Complex-valued variant sharing one point stream for both components.
template <class F>
McComplexEstimate integrate_2d_mc_complex(F&& f, const BoxRegion& box, const McSpec& spec) {
    CounterRng rng(spec.seed);
    detail::KahanSum re, re_sq, im, im_sq;
    for (std::uint64_t i = 0; i < spec.sample_count; ++i) {
        const double x = box.x0 + (box.x1 - box.x0) * rng.uniform(2 * i);
        const double y = box.y0 + (box.y1 - box.y0) * rng.uniform(2 * i + 1);
        const std::complex<double> v = f(x, y);
        re.add(v.real());
        re_sq.add(v.real() * v.real());
        im.add(v.imag());
        im_sq.add(v.imag() * v.imag());
    }
    const double n = static_cast<double>(spec.sample_count);
    const double mr = re.sum / n;
    const double mi = im.sum / n;
    double vr = 0.0, vi = 0.0;
    if (spec.sample_count > 1) {
        vr = std::max(0.0, (re_sq.sum / n - mr * mr) * n / (n - 1.0));
        vi = std::max(0.0, (im_sq.sum / n - mi * mi) * n / (n - 1.0));
    }
    return {box.measure() * std::complex<double>(mr, mi),
            box.measure() * std::sqrt(vr / n), box.measure() * std::sqrt(vi / n)};
}

}  // namespace diffract
