#include "diffract/momentum_pdf.hpp"

#include <cmath>
#include <stdexcept>

namespace diffract {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

}  // namespace

MomentumPeak::MomentumPeak(double p0_value, double delta_p_value)
    : p0(p0_value), delta_p(delta_p_value) {
    if (!(p0 > 0.0)) throw std::invalid_argument("peak center must be positive");
    if (!(delta_p > 0.0)) throw std::invalid_argument("peak width must be positive");
}

double MomentumPeak::density(double p) const {
    const double u = (p - p0) / delta_p;
    if (std::fabs(u) > 5.0) return 0.0;
    return std::exp(-0.5 * u * u) / (delta_p * std::sqrt(2.0 * M_PI));
}

FinalStatePdf::FinalStatePdf(ApertureShape shape, LongitudinalFilter filter, double p0,
                             double delta_p_rel, PdfQuadratureOptions opts)
    : shape_(std::move(shape)),
      filter_(filter),
      peak_(p0, delta_p_rel * p0),
      opts_(opts) {
    if (!(delta_p_rel > 0.0)) throw std::invalid_argument("delta_p_rel must be positive");
    if (peak_.window_low() <= 0.0)
        throw std::invalid_argument("modulus peak window must stay positive");
}

double FinalStatePdf::longitudinal_weight(double dq) const {
    switch (filter_.kind()) {
        case LongitudinalFilter::Kind::dirac:
            return 1.0;
        case LongitudinalFilter::Kind::gaussian: {
            const double s = filter_.sigma_z();
            return std::exp(-2.0 * s * s * dq * dq);
        }
        case LongitudinalFilter::Kind::uniform: {
            const double v = sinc(0.5 * dq * filter_.delta_z());
            return v * v;
        }
    }
    return 1.0;
}

double FinalStatePdf::density_cartesian(const MomentumVec& p) const {
    if (p.pz <= 0.0) return 0.0;
    const double peak_value = peak_.density(p.modulus());
    if (peak_value == 0.0) return 0.0;
    const double ft_mag = std::abs(shape_.transverse_ft(p.px, p.py));
    return peak_value * ft_mag * ft_mag * longitudinal_weight(p.pz - peak_.p0) /
           normalization();
}

double FinalStatePdf::unnormalized_angles(double p, double theta_x, double theta_y) const {
    const double peak_value = peak_.density(p);
    if (peak_value == 0.0) return 0.0;
    const double tan_x = std::tan(theta_x);
    const double tan_y = std::tan(theta_y);
    const double cos_chi = 1.0 / std::sqrt(1.0 + tan_x * tan_x + tan_y * tan_y);
    const double sin_x = std::sin(theta_x);
    const double sin_y = std::sin(theta_y);
    const double gamma = cos_chi / (1.0 - sin_x * sin_x * sin_y * sin_y);
    const double ft_mag =
        std::abs(shape_.transverse_ft(p * cos_chi * tan_x, p * cos_chi * tan_y));
    return p * p * peak_value * gamma * ft_mag * ft_mag *
           longitudinal_weight(p * cos_chi - peak_.p0);
}

double FinalStatePdf::density_angles(double p, double theta_x, double theta_y) const {
    return unnormalized_angles(p, theta_x, theta_y) / normalization();
}

double FinalStatePdf::angle_integral_at(double p, const QuadratureSpec& spec) const {
    // Nested adaptive panels. Rows far out in theta_y are orders of
    // magnitude below the central one; their absolute floor is tied to the
    // central row's integral so the subdivision budget is not burned on
    // relative accuracy of negligible contributions.
    auto row = [&](double ty, double floor) {
        return integrate_adaptive([&](double tx) { return unnormalized_angles(p, tx, ty); },
                                  -kHalfPi, kHalfPi, spec, floor)
            .value;
    };
    const double center_row = std::max(std::fabs(row(0.0, 0.0)), 1e-300);
    const double inner_floor = 1e-3 * spec.adaptive_tolerance * center_row;
    return integrate_adaptive([&](double ty) { return row(ty, inner_floor); }, -kHalfPi,
                              kHalfPi, spec)
        .value;
}

FinalStatePdf::NormData FinalStatePdf::compute_norm(const PdfQuadratureOptions& opts) const {
    NormData data;
    const GaussLegendreRule rule = gauss_legendre(opts.p_nodes);
    const double lo = peak_.window_low();
    const double hi = peak_.window_high();
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    data.p_nodes.resize(rule.nodes.size());
    data.p_weights.resize(rule.nodes.size());
    data.angle_integrals.resize(rule.nodes.size());
    double total = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        data.p_nodes[i] = mid + half * rule.nodes[i];
        data.p_weights[i] = half * rule.weights[i];
        data.angle_integrals[i] = angle_integral_at(data.p_nodes[i], opts.angle_spec);
        total += data.p_weights[i] * data.angle_integrals[i];
    }
    data.total = total;
    return data;
}

const FinalStatePdf::NormData& FinalStatePdf::norm_data() const {
    std::lock_guard<std::mutex> lock(norm_mutex_);
    if (!norm_.has_value()) norm_ = compute_norm(opts_);
    return *norm_;
}

double FinalStatePdf::normalization() const { return norm_data().total; }

double FinalStatePdf::normalization_with(const PdfQuadratureOptions& opts) const {
    return compute_norm(opts).total;
}

double FinalStatePdf::directional_density(double theta_x, double theta_y) const {
    const GaussLegendreRule rule = gauss_legendre(opts_.p_nodes);
    const double value = integrate_fixed_gl(
        [&](double p) { return unnormalized_angles(p, theta_x, theta_y); }, peak_.window_low(),
        peak_.window_high(), rule);
    return value / normalization();
}

double FinalStatePdf::directional_ratio(double theta_x, double theta_y) const {
    const GaussLegendreRule rule = gauss_legendre(opts_.p_nodes);
    const double lo = peak_.window_low();
    const double hi = peak_.window_high();
    const double at_angle = integrate_fixed_gl(
        [&](double p) { return unnormalized_angles(p, theta_x, theta_y); }, lo, hi, rule);
    const double forward = integrate_fixed_gl(
        [&](double p) { return unnormalized_angles(p, 0.0, 0.0); }, lo, hi, rule);
    return at_angle / forward;
}

std::vector<double> FinalStatePdf::marginal_modulus(std::span<const double> p_grid) const {
    std::vector<double> out;
    out.reserve(p_grid.size());
    const double n = normalization();
    for (double p : p_grid) out.push_back(angle_integral_at(p, opts_.angle_spec) / n);
    return out;
}

FinalStatePdf::ModulusMoments FinalStatePdf::modulus_moments() const {
    const NormData& data = norm_data();
    double mass = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < data.p_nodes.size(); ++i) {
        const double f = data.p_weights[i] * data.angle_integrals[i] / data.total;
        mass += f;
        mean += f * data.p_nodes[i];
    }
    mean /= mass;
    double var = 0.0;
    for (std::size_t i = 0; i < data.p_nodes.size(); ++i) {
        const double f = data.p_weights[i] * data.angle_integrals[i] / data.total;
        var += f * (data.p_nodes[i] - mean) * (data.p_nodes[i] - mean);
    }
    var /= mass;
    return {mass, mean, std::sqrt(var)};
}

double transitional_transverse_pdf(const ApertureShape& shape, double px, double py) {
    const double mag = std::abs(shape.transverse_ft(px, py));
    return mag * mag / (4.0 * M_PI * M_PI);
}

double transitional_longitudinal_pdf(const LongitudinalFilter& filter, double pz, double p0) {
    const double mag = std::abs(longitudinal_ft(filter, pz - p0));  // throws for Dirac
    return mag * mag / (2.0 * M_PI);
}

double pz_positive_mass(const ApertureShape& /*shape*/, const LongitudinalFilter& filter,
                        double p0) {
    // The transverse factor is independent of Pz, so only the longitudinal
    // marginal matters.
    switch (filter.kind()) {
        case LongitudinalFilter::Kind::dirac:
            throw std::domain_error(
                "pz_positive_mass: transitional density undefined for the Dirac filter");
        case LongitudinalFilter::Kind::gaussian: {
            const double sigma_pz = 0.5 / filter.sigma_z();
            const double hi = p0 + 40.0 * sigma_pz;
            QuadratureSpec spec{64, 1e-11, 24};
            return integrate_adaptive(
                       [&](double pz) { return transitional_longitudinal_pdf(filter, pz, p0); },
                       0.0, hi, spec)
                .value;
        }
        case LongitudinalFilter::Kind::uniform: {
            // P(Pz <= 0) = (1/pi) int_{u0}^inf sinc^2(u) du with
            // u0 = p0 dz / 2; head by quadrature, oscillatory remainder by
            // integration by parts (error O(U^-4)).
            const double u0 = 0.5 * p0 * filter.delta_z();
            if (u0 <= 0.0) throw std::domain_error("pz_positive_mass: need p0 > 0");
            const double cap = u0 + 1000.0 * M_PI;
            QuadratureSpec spec{64, 1e-11, 24};
            const double head = integrate_adaptive(
                                    [](double u) {
                                        const double s = sinc(u);
                                        return s * s;
                                    },
                                    u0, cap, spec)
                                    .value;
            const double tail = 0.5 / cap + std::sin(2.0 * cap) / (4.0 * cap * cap) -
                                std::cos(2.0 * cap) / (4.0 * cap * cap * cap);
            return 1.0 - (head + tail) / M_PI;
        }
    }
    return 1.0;
}

}  // namespace diffract
