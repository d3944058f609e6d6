#include "diffract/theories.hpp"

#include <cmath>
#include <stdexcept>

#include "diffract/kinematics.hpp"

namespace diffract {

double obliquity(TheoryKind theory, double chi) {
    if (!(chi >= 0.0 && chi <= M_PI_2))
        throw std::domain_error("obliquity: chi must be in [0, pi/2]");
    switch (theory) {
        case TheoryKind::fk:
            return 0.5 * (1.0 + std::cos(chi));
        case TheoryKind::rs1:
            return std::cos(chi);
        case TheoryKind::rs2:
            return 1.0;
        case TheoryKind::qm:
        case TheoryKind::sommerfeld_slit:
            break;
    }
    throw std::domain_error("obliquity: defined for the classical theories only");
}

double classical_relative_intensity(TheoryKind theory, const ApertureShape& shape, double p,
                                    double theta_x, double theta_y) {
    const double chi = deflection_angle(theta_x, theta_y);
    const double omega = obliquity(theory, chi);
    return omega * omega * shape.transverse_term(p, theta_x, theta_y);
}

double quantum_relative_intensity(const LongitudinalFilter& filter, const ApertureShape& shape,
                                  double p, double theta_x, double theta_y) {
    const double chi = deflection_angle(theta_x, theta_y);
    return angular_factor(theta_x, theta_y) * shape.transverse_term(p, theta_x, theta_y) *
           longitudinal_term(filter, p, chi);
}

double sommerfeld_slit_relative_intensity(double half_width_a, double p, double theta) {
    if (!(half_width_a > 0.0 && p > 0.0))
        throw std::domain_error("sommerfeld_slit: half width and wavenumber must be positive");
    if (!(std::fabs(theta) < M_PI_2))
        throw std::domain_error("sommerfeld_slit: theta must be in (-pi/2, pi/2)");
    const double t = sinc(half_width_a * p * std::sin(theta));
    const double edge = 2.0 * half_width_a * p * std::cos(0.5 * theta);
    return std::cos(theta) * t * t + 1.0 / (edge * edge);
}

bool theory_ordering_check(const ApertureShape& shape, double p, double theta) {
    const LongitudinalFilter dirac = LongitudinalFilter::dirac();
    const double i_qm = quantum_relative_intensity(dirac, shape, p, theta, 0.0);
    const double i_fk = classical_relative_intensity(TheoryKind::fk, shape, p, theta, 0.0);
    const double i_rs1 = classical_relative_intensity(TheoryKind::rs1, shape, p, theta, 0.0);
    const double i_rs2 = classical_relative_intensity(TheoryKind::rs2, shape, p, theta, 0.0);
    return i_rs2 >= i_fk && i_fk >= i_qm && i_qm >= i_rs1;
}

PredictionPoint predict(const ApertureShape& shape, const LongitudinalFilter& filter, double p,
                        double theta_x, double theta_y, bool with_sommerfeld) {
    PredictionPoint pt;
    pt.theta_x = theta_x;
    pt.theta_y = theta_y;
    const double chi = deflection_angle(theta_x, theta_y);
    const double cos_chi = std::cos(chi);
    pt.transverse = shape.transverse_term(p, theta_x, theta_y);
    pt.longitudinal = longitudinal_term(filter, p, chi);
    pt.gamma = angular_factor(theta_x, theta_y);
    pt.i_qm = pt.gamma * pt.transverse * pt.longitudinal;
    const double fk = 0.5 * (1.0 + cos_chi);
    pt.i_fk = fk * fk * pt.transverse;
    pt.i_rs1 = cos_chi * cos_chi * pt.transverse;
    pt.i_rs2 = pt.transverse;
    if (with_sommerfeld) {
        const ApertureShape::Rect* rect = shape.as_rectangle();
        if (rect == nullptr)
            throw std::invalid_argument("sommerfeld prediction needs a rectangular aperture");
        if (theta_y != 0.0)
            throw std::invalid_argument("sommerfeld prediction is in-plane only");
        pt.i_sommerfeld = sommerfeld_slit_relative_intensity(rect->half_width, p, theta_x);
        pt.has_sommerfeld = true;
    }
    return pt;
}

}  // namespace diffract
