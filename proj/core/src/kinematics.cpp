#include "diffract/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace diffract {

namespace {

constexpr double kHbar = 1.054571817e-34;  // J s
constexpr double kC = 299792458.0;         // m/s
constexpr double kHalfPi = 1.5707963267948966;

void check_angles(double tx, double ty) {
    if (!(std::fabs(tx) < kHalfPi) || !(std::fabs(ty) < kHalfPi))
        throw std::domain_error("diffraction angles must lie in (-pi/2, pi/2)");
}

}  // namespace

double MomentumVec::modulus() const { return std::sqrt(px * px + py * py + pz * pz); }

MomentumDirection::MomentumDirection(double p_modulus, double theta_x_rad, double theta_y_rad)
    : p(p_modulus), theta_x(theta_x_rad), theta_y(theta_y_rad) {
    if (!(p > 0.0)) throw std::domain_error("momentum modulus must be positive");
    check_angles(theta_x, theta_y);
}

ParticleKinematics ParticleKinematics::from_wavelength_nm(double wavelength_nm, double mass_kg) {
    if (!(wavelength_nm > 0.0)) throw std::domain_error("wavelength must be positive");
    return {mass_kg, 2.0 * M_PI / (wavelength_nm * 1e-3)};
}

double ParticleKinematics::wavelength_um() const { return 2.0 * M_PI / p0; }

MomentumDirection to_angles(const MomentumVec& p) {
    if (!(p.pz > 0.0))
        throw std::domain_error("to_angles: defined on the half-space pz > 0 only");
    return {p.modulus(), std::atan2(p.px, p.pz), std::atan2(p.py, p.pz)};
}

MomentumVec from_angles(const MomentumDirection& d) {
    const double cos_chi = std::cos(deflection_angle(d.theta_x, d.theta_y));
    return {d.p * cos_chi * std::tan(d.theta_x), d.p * cos_chi * std::tan(d.theta_y),
            d.p * cos_chi};
}

double deflection_angle(double theta_x, double theta_y) {
    check_angles(theta_x, theta_y);
    const double tx = std::tan(theta_x);
    const double ty = std::tan(theta_y);
    return std::acos(1.0 / std::sqrt(1.0 + tx * tx + ty * ty));
}

double angular_factor(double theta_x, double theta_y) {
    const double cos_chi = std::cos(deflection_angle(theta_x, theta_y));
    const double sx = std::sin(theta_x);
    const double sy = std::sin(theta_y);
    return cos_chi / (1.0 - sx * sx * sy * sy);
}

namespace {

double jacobian_fd(const MomentumDirection& d, double h) {
    const double hp = h * d.p;
    if (std::fabs(d.theta_x) + h >= kHalfPi || std::fabs(d.theta_y) + h >= kHalfPi)
        throw std::domain_error("jacobian_oracle: step leaves the angle domain");

    const MomentumVec dp_hi = from_angles({d.p + hp, d.theta_x, d.theta_y});
    const MomentumVec dp_lo = from_angles({d.p - hp, d.theta_x, d.theta_y});
    const MomentumVec dx_hi = from_angles({d.p, d.theta_x + h, d.theta_y});
    const MomentumVec dx_lo = from_angles({d.p, d.theta_x - h, d.theta_y});
    const MomentumVec dy_hi = from_angles({d.p, d.theta_x, d.theta_y + h});
    const MomentumVec dy_lo = from_angles({d.p, d.theta_x, d.theta_y - h});

    const double c0[3] = {(dp_hi.px - dp_lo.px) / (2 * hp), (dp_hi.py - dp_lo.py) / (2 * hp),
                          (dp_hi.pz - dp_lo.pz) / (2 * hp)};
    const double c1[3] = {(dx_hi.px - dx_lo.px) / (2 * h), (dx_hi.py - dx_lo.py) / (2 * h),
                          (dx_hi.pz - dx_lo.pz) / (2 * h)};
    const double c2[3] = {(dy_hi.px - dy_lo.px) / (2 * h), (dy_hi.py - dy_lo.py) / (2 * h),
                          (dy_hi.pz - dy_lo.pz) / (2 * h)};

    const double det = c0[0] * (c1[1] * c2[2] - c1[2] * c2[1]) -
                       c1[0] * (c0[1] * c2[2] - c0[2] * c2[1]) +
                       c2[0] * (c0[1] * c1[2] - c0[2] * c1[1]);
    return std::fabs(det) / (d.p * d.p);
}

}  // namespace

double jacobian_oracle(const MomentumDirection& d, double h, bool richardson) {
    if (!richardson) return jacobian_fd(d, h);
    const double coarse = jacobian_fd(d, h);
    const double fine = jacobian_fd(d, 0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

double energy_joules(const ParticleKinematics& kin, double p_modulus) {
    if (!(p_modulus > 0.0)) throw std::domain_error("energy: momentum modulus must be positive");
    const double p_si = kHbar * p_modulus * 1e6;  // rad/um -> rad/m
    const double mc = kin.mass_kg * kC;
    return kC * std::sqrt(mc * mc + p_si * p_si);
}

}  // namespace diffract
