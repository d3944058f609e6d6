#pragma once

#include <complex>

namespace diffract {

/// Longitudinal position weight along the beam axis: a Dirac spike at z = 0,
/// a centered Gaussian of standard deviation sigma_z, or a centered uniform
/// window of width delta_z. Nonnegative and normalized to unit integral.
class LongitudinalFilter {
public:
    enum class Kind { dirac, gaussian, uniform };

    static LongitudinalFilter dirac();
    static LongitudinalFilter gaussian(double sigma_z_um);
    static LongitudinalFilter uniform(double delta_z_um);

    Kind kind() const { return kind_; }
    double sigma_z() const;  // gaussian only
    double delta_z() const;  // uniform only

    /// F_L(z) for the gaussian and uniform variants; the Dirac filter is a
    /// distribution, not a function, so asking for its value throws.
    double value(double z) const;

private:
    LongitudinalFilter(Kind kind, double param) : kind_(kind), param_(param) {}
    Kind kind_;
    double param_ = 0.0;
};

/// Width of the interval outside which the filter's integral is at most
/// alpha: 0 for Dirac, delta_z for uniform, 2 z_{alpha/2} sigma_z for the
/// Gaussian (about 5.16 sigma_z at alpha = 0.01).
double effective_delta_z(const LongitudinalFilter& filter, double alpha);

/// Amplitude-level transform integral sqrt(F_L(z)) exp(-i dq z) dz over the
/// whole axis (um^{1/2}). Real for these centered symmetric filters:
///   gaussian: (8 pi)^{1/4} sqrt(sigma_z) exp(-sigma_z^2 dq^2)
///   uniform:  sqrt(delta_z) sinc(dq delta_z / 2)
/// The Dirac filter has no square-root amplitude; use longitudinal_term,
/// which carries its limit value. Throws std::domain_error for Dirac.
std::complex<double> longitudinal_ft(const LongitudinalFilter& filter, double dq);

/// Longitudinal damping L(p, chi) = |FT(p(cos chi - 1))|^2 / |FT(0)|^2 in
/// (0, 1]:
///   dirac:    1 (the sigma_z -> 0 limit)
///   gaussian: exp[-2 sigma_z^2 p^2 (1 - cos chi)^2]
///   uniform:  sinc^2(p (1 - cos chi) delta_z / 2)
double longitudinal_term(const LongitudinalFilter& filter, double p, double chi);

}  // namespace diffract
