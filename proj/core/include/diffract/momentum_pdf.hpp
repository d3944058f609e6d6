#pragma once

#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "diffract/aperture.hpp"
#include "diffract/kinematics.hpp"
#include "diffract/longitudinal.hpp"
#include "diffract/numerics.hpp"

namespace diffract {

/// Narrow normalized Gaussian peak in the momentum modulus, centered at p0
/// with standard deviation delta_p, truncated at +-5 delta_p (the
/// quadrature window). The truncated mass (~6e-7) is absorbed by the
/// density normalization.
struct MomentumPeak {
    double p0 = 0.0;
    double delta_p = 0.0;

    MomentumPeak(double p0_value, double delta_p_value);

    bool is_narrow() const { return delta_p <= 0.05 * p0; }
    double density(double p) const;
    double window_low() const { return p0 - 5.0 * delta_p; }
    double window_high() const { return p0 + 5.0 * delta_p; }
};

/// Quadrature budget for the momentum-space integrals: Gauss-Legendre node
/// count across the modulus peak and the adaptive spec for each angle axis.
struct PdfQuadratureOptions {
    int p_nodes = 20;
    QuadratureSpec angle_spec{64, 3e-8, 15};
};

/// Normalized momentum density of the outgoing state: supported on pz > 0,
/// proportional to
///   peak(|p|) * |FT_transverse(px, py)|^2 * w_L(pz - p0)
/// with w_L the longitudinal damping profile (identically 1 for the Dirac
/// filter). Normalization is computed lazily by deterministic quadrature
/// in (p, theta_x, theta_y) variables and cached.
class FinalStatePdf {
public:
    FinalStatePdf(ApertureShape shape, LongitudinalFilter filter, double p0,
                  double delta_p_rel = 1e-3, PdfQuadratureOptions opts = {});

    const MomentumPeak& peak() const { return peak_; }
    const ApertureShape& shape() const { return shape_; }
    const LongitudinalFilter& filter() const { return filter_; }

    /// Density in Cartesian momentum components; exactly 0 for pz <= 0.
    double density_cartesian(const MomentumVec& p) const;

    /// Density in (p, theta_x, theta_y):
    /// p^2 * Gamma(tx, ty) * density_cartesian(from_angles(...)).
    double density_angles(double p, double theta_x, double theta_y) const;

    /// Normalization integral of the unnormalized density (cached).
    double normalization() const;

    /// Same integral recomputed with a caller-supplied budget; used to
    /// cross-check convergence independently of the cached value.
    double normalization_with(const PdfQuadratureOptions& opts) const;

    /// Direction marginal (integral over the modulus peak), normalized.
    double directional_density(double theta_x, double theta_y) const;

    /// directional_density(tx, ty) / directional_density(0, 0); the
    /// normalization cancels, so this never triggers the full 3D integral.
    double directional_ratio(double theta_x, double theta_y) const;

    /// Modulus marginal evaluated on a grid (one 2D angle integral each).
    std::vector<double> marginal_modulus(std::span<const double> p_grid) const;

    struct ModulusMoments {
        double mass = 0.0;
        double mean = 0.0;
        double stddev = 0.0;
    };
    /// Mass, mean and standard deviation of the modulus marginal over the
    /// peak window, from the cached normalization nodes.
    ModulusMoments modulus_moments() const;

    FinalStatePdf(const FinalStatePdf&) = delete;
    FinalStatePdf& operator=(const FinalStatePdf&) = delete;

private:
    struct NormData {
        std::vector<double> p_nodes;
        std::vector<double> p_weights;
        std::vector<double> angle_integrals;  // full integrand marginal at each node
        double total = 0.0;
    };

    double longitudinal_weight(double dq) const;
    double unnormalized_angles(double p, double theta_x, double theta_y) const;
    double angle_integral_at(double p, const QuadratureSpec& spec) const;
    NormData compute_norm(const PdfQuadratureOptions& opts) const;
    const NormData& norm_data() const;

    ApertureShape shape_;
    LongitudinalFilter filter_;
    MomentumPeak peak_;
    PdfQuadratureOptions opts_;

    mutable std::mutex norm_mutex_;
    mutable std::optional<NormData> norm_;
};

/// Momentum-plane density right after the position stage, transverse part:
/// |FT_transverse(px, py)|^2 / (2 pi)^2, normalized over the plane.
double transitional_transverse_pdf(const ApertureShape& shape, double px, double py);

/// Longitudinal part: |FT_longitudinal(pz - p0)|^2 / (2 pi), normalized in
/// pz. A Gaussian filter of width sigma_z gives a Gaussian in pz centered
/// at p0 with standard deviation 1/(2 sigma_z). Throws for the Dirac
/// filter, whose square-root amplitude does not exist.
double transitional_longitudinal_pdf(const LongitudinalFilter& filter, double pz, double p0);

/// P(Pz > 0) under the transitional density (the transverse factor is
/// independent of Pz and drops out). Reported so users can see how much of
/// the post-position state points backwards; the outgoing density above is
/// exactly zero there by construction. Throws for the Dirac filter.
double pz_positive_mass(const ApertureShape& shape, const LongitudinalFilter& filter, double p0);

}  // namespace diffract
