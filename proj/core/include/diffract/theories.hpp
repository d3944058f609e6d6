#pragma once

#include "diffract/aperture.hpp"
#include "diffract/longitudinal.hpp"

namespace diffract {

/// The five far-field predictions. The quantum model pairs with a
/// longitudinal filter; the closed-form slit variant applies to the
/// in-plane slice of rectangular apertures only.
enum class TheoryKind { qm, fk, rs1, rs2, sommerfeld_slit };

/// Obliquity prefactor of the classical amplitude:
/// FK (1+cos chi)/2, RS1 cos chi, RS2 1. The quantum model has no
/// obliquity factor (its angular weight is the Jacobian-based factor), so
/// asking for one throws std::domain_error.
double obliquity(TheoryKind theory, double chi);

/// Classical relative intensity Omega(chi)^2 * T for FK / RS1 / RS2.
double classical_relative_intensity(TheoryKind theory, const ApertureShape& shape, double p,
                                    double theta_x, double theta_y);

/// Quantum relative intensity Gamma * T * L; reduces to
/// cos(theta) * T * L on the in-plane slice theta_y = 0.
double quantum_relative_intensity(const LongitudinalFilter& filter, const ApertureShape& shape,
                                  double p, double theta_x, double theta_y);

/// In-plane slit prediction from the rigorous wedge solution:
/// cos(theta) * T + [2 a p cos(theta/2)]^{-2}. The additive term keeps the
/// minima strictly positive.
double sommerfeld_slit_relative_intensity(double half_width_a, double p, double theta);

/// True when the Dirac-filter predictions at in-plane angle theta satisfy
/// RS2 >= FK >= QM >= RS1 (ties only in the forward direction).
bool theory_ordering_check(const ApertureShape& shape, double p, double theta);

/// One scan row: angles plus shared components and per-theory intensities.
struct PredictionPoint {
    double theta_x = 0.0;
    double theta_y = 0.0;
    double transverse = 1.0;   // T
    double longitudinal = 1.0; // L
    double gamma = 1.0;        // angular factor
    double i_qm = 1.0;
    double i_fk = 1.0;
    double i_rs1 = 1.0;
    double i_rs2 = 1.0;
    double i_sommerfeld = 0.0;
    bool has_sommerfeld = false;
};

/// Evaluates every prediction at one direction from the shared components,
/// so the ratio identities between theories hold to machine precision.
/// with_sommerfeld requires a rectangular shape and theta_y = 0.
PredictionPoint predict(const ApertureShape& shape, const LongitudinalFilter& filter, double p,
                        double theta_x, double theta_y, bool with_sommerfeld = false);

}  // namespace diffract
