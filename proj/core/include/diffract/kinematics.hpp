#pragma once

namespace diffract {

// Unit convention used throughout: "momentum" components are stored as
// wavenumbers in rad/um (p and hbar*k coincide up to the constant hbar,
// which cancels in every exported ratio). Lengths are in um.

struct MomentumVec {
    double px = 0.0;
    double py = 0.0;
    double pz = 0.0;

    double modulus() const;
};

/// (modulus, diffraction angles) coordinates of a forward momentum.
/// Valid on the half-space pz > 0: p > 0 and both angles in (-pi/2, pi/2),
/// enforced at construction.
struct MomentumDirection {
    double p;
    double theta_x;
    double theta_y;

    MomentumDirection(double p_modulus, double theta_x_rad, double theta_y_rad);
};

/// Particle described by rest mass and forward wavenumber modulus.
struct ParticleKinematics {
    double mass_kg = 0.0;
    double p0 = 0.0;  // rad/um

    static ParticleKinematics from_wavelength_nm(double wavelength_nm, double mass_kg = 0.0);
    double wavelength_um() const;
};

/// Cartesian -> (p, theta_x, theta_y). Throws std::domain_error unless
/// pz > 0 (the map is defined on the forward half-space only).
MomentumDirection to_angles(const MomentumVec& p);

/// (p, theta_x, theta_y) -> Cartesian, the inverse map:
/// px = p cos(chi) tan(theta_x), py = p cos(chi) tan(theta_y), pz = p cos(chi).
MomentumVec from_angles(const MomentumDirection& d);

/// Deflection angle chi between the outgoing direction and the z axis,
/// chi = arccos[(1 + tan^2 tx + tan^2 ty)^{-1/2}], in [0, pi/2).
double deflection_angle(double theta_x, double theta_y);

/// Angular factor cos(chi) / (1 - sin^2 tx sin^2 ty): the modulus of the
/// Jacobian of from_angles divided by p^2. In (0, 1], equal to 1 only at
/// the forward direction.
double angular_factor(double theta_x, double theta_y);

/// Finite-difference check of angular_factor:
/// |det d(px,py,pz)/d(p,tx,ty)| / p^2 by central differences of
/// from_angles. Step h is in radians for the angle columns and scaled by p
/// for the modulus column. Richardson extrapolation halves h once and
/// cancels the leading h^2 error term.
double jacobian_oracle(const MomentumDirection& d, double h = 1e-5, bool richardson = false);

/// Energy in joules: c * sqrt((m c)^2 + (hbar k)^2); reduces to hbar*k*c
/// for massless particles.
double energy_joules(const ParticleKinematics& kin, double p_modulus);

}  // namespace diffract
