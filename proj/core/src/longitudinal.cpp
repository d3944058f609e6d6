#include "diffract/longitudinal.hpp"

#include <cmath>
#include <stdexcept>

#include "diffract/numerics.hpp"

namespace diffract {

LongitudinalFilter LongitudinalFilter::dirac() { return {Kind::dirac, 0.0}; }

LongitudinalFilter LongitudinalFilter::gaussian(double sigma_z_um) {
    if (!(sigma_z_um > 0.0)) throw std::invalid_argument("gaussian filter needs sigma_z > 0");
    return {Kind::gaussian, sigma_z_um};
}

LongitudinalFilter LongitudinalFilter::uniform(double delta_z_um) {
    if (!(delta_z_um > 0.0)) throw std::invalid_argument("uniform filter needs delta_z > 0");
    return {Kind::uniform, delta_z_um};
}

double LongitudinalFilter::sigma_z() const {
    if (kind_ != Kind::gaussian) throw std::logic_error("sigma_z: not a gaussian filter");
    return param_;
}

double LongitudinalFilter::delta_z() const {
    if (kind_ != Kind::uniform) throw std::logic_error("delta_z: not a uniform filter");
    return param_;
}

double LongitudinalFilter::value(double z) const {
    switch (kind_) {
        case Kind::gaussian:
            return std::exp(-0.5 * z * z / (param_ * param_)) / (param_ * std::sqrt(2.0 * M_PI));
        case Kind::uniform:
            return std::fabs(z) <= 0.5 * param_ ? 1.0 / param_ : 0.0;
        case Kind::dirac:
            break;
    }
    throw std::domain_error("value: the Dirac filter is a distribution, not a function");
}

double effective_delta_z(const LongitudinalFilter& filter, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("effective_delta_z: alpha must be in (0,1)");
    switch (filter.kind()) {
        case LongitudinalFilter::Kind::dirac:
            return 0.0;
        case LongitudinalFilter::Kind::uniform:
            return filter.delta_z();
        case LongitudinalFilter::Kind::gaussian:
            return 2.0 * normal_quantile(1.0 - 0.5 * alpha) * filter.sigma_z();
    }
    return 0.0;
}

std::complex<double> longitudinal_ft(const LongitudinalFilter& filter, double dq) {
    switch (filter.kind()) {
        case LongitudinalFilter::Kind::gaussian: {
            const double s = filter.sigma_z();
            return std::pow(8.0 * M_PI, 0.25) * std::sqrt(s) * std::exp(-s * s * dq * dq);
        }
        case LongitudinalFilter::Kind::uniform: {
            const double dz = filter.delta_z();
            return std::sqrt(dz) * sinc(0.5 * dq * dz);
        }
        case LongitudinalFilter::Kind::dirac:
            break;
    }
    throw std::domain_error(
        "longitudinal_ft: no square-root amplitude for the Dirac filter; "
        "use longitudinal_term, which carries the limit value");
}

double longitudinal_term(const LongitudinalFilter& filter, double p, double chi) {
    if (!(p > 0.0)) throw std::domain_error("longitudinal_term: wavenumber must be positive");
    // Deflection angles of forward momenta stay below pi/2, but the damping
    // extends continuously to the transverse direction itself.
    if (!(chi >= 0.0 && chi <= M_PI_2))
        throw std::domain_error("longitudinal_term: chi must be in [0, pi/2]");
    const double dq = p * (1.0 - std::cos(chi));
    switch (filter.kind()) {
        case LongitudinalFilter::Kind::dirac:
            return 1.0;
        case LongitudinalFilter::Kind::gaussian: {
            const double s = filter.sigma_z();
            return std::exp(-2.0 * s * s * dq * dq);
        }
        case LongitudinalFilter::Kind::uniform: {
            const double v = sinc(0.5 * dq * filter.delta_z());
            return v * v;
        }
    }
    return 1.0;
}

}  // namespace diffract
