#include "diffract/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace diffract {

namespace {

// Power series sum_k (-1)^k (x/2)^{2k+1} / (k! (k+1)!), used below |x| = 9
// where the largest term stays small enough that cancellation costs at most
// two digits.
double j1_series(double x) {
    const double q = 0.25 * x * x;
    double term = 0.5 * x;
    double sum = term;
    for (int k = 1; k <= 60; ++k) {
        term *= -q / (static_cast<double>(k) * (k + 1));
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    }
    return sum;
}

// Miller's algorithm: downward recurrence J_{j-1} = (2j/x) J_j - J_{j+1}
// started well above x with an arbitrary tiny seed, normalized with
// J_0 + 2 sum_k J_{2k} = 1.
double j1_miller(double x) {
    int m = static_cast<int>(x + 14.0 * std::cbrt(x) + 30.0);
    m += m % 2;  // even start order
    double bjp = 0.0;   // J_{j+1}
    double bj = 1e-30;  // J_j
    double ans = 0.0;
    double sum = 0.0;
    bool add_even = false;
    for (int j = m; j >= 1; --j) {
        const double bjm = (2.0 * j / x) * bj - bjp;
        bjp = bj;
        bj = bjm;  // now holds J_{j-1}
        if (std::fabs(bj) > 1e100) {
            bj *= 1e-100;
            bjp *= 1e-100;
            ans *= 1e-100;
            sum *= 1e-100;
        }
        if (add_even) sum += bj;  // j odd here, so bj is an even order
        add_even = !add_even;
        if (j == 1) ans = bjp;  // bjp = J_1 after the final update
    }
    sum = 2.0 * sum - bj;  // bj = J_0
    return ans / sum;
}

}  // namespace

double bessel_j1(double x) {
    if (x == 0.0) return 0.0;
    const double ax = std::fabs(x);
    double v;
    if (ax <= 9.0)
        v = j1_series(ax);
    else
        v = j1_miller(ax);
    return x < 0.0 ? -v : v;
}

double sinc(double x) {
    if (std::fabs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double prob) {
    if (!(prob > 0.0 && prob < 1.0))
        throw std::domain_error("normal_quantile: probability must be in (0,1)");
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < prob ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    // Newton polish; the density is well above zero this close to the root.
    for (int i = 0; i < 4; ++i) {
        const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
        if (pdf < 1e-300) break;
        x -= (normal_cdf(x) - prob) / pdf;
    }
    return x;
}

GaussLegendreRule gauss_legendre(int n) {
    if (n < 2) throw std::invalid_argument("gauss_legendre: need n >= 2");
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec) {
    if (!(a < b)) throw std::invalid_argument("integrate_1d: need a < b");
    return integrate_adaptive(f, a, b, spec);
}

}  // namespace diffract
