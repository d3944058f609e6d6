#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diffract/aperture.hpp"
#include "diffract/longitudinal.hpp"
#include "diffract/theories.hpp"

namespace diffract {

enum class ScanMode { in_plane, grid };

struct AngleRange {
    double min_deg = 0.0;
    double max_deg = 0.0;
    int steps = 2;
};

struct TheorySet {
    bool qm = true;
    bool fk = true;
    bool rs1 = true;
    bool rs2 = true;
    bool sommerfeld = false;
};

/// Fully validated description of one angular scan. Angles are degrees at
/// this level and radians inside the engine.
struct ScanConfig {
    double wavelength_nm;
    ApertureShape shape;
    LongitudinalFilter filter;
    TheorySet theories;
    ScanMode mode = ScanMode::in_plane;
    AngleRange theta_x;
    AngleRange theta_y;  // grid mode only
    double delta_p_rel = 1e-3;
    std::uint64_t mc_seed = 0;
    std::string output;      // CSV path; empty means stdout
    std::string svg_output;  // empty means no plot
    bool svg_log = true;

    /// Wavenumber modulus in rad/um.
    double wavenumber() const;
};

struct ParseOutcome {
    std::optional<ScanConfig> config;
    std::vector<std::string> errors;    // all problems, not first-error-only
    std::vector<std::string> warnings;  // e.g. wavelength larger than the aperture
};

/// Parses the line-oriented `key = value` scan description. On any error
/// the config is absent and `errors` lists every problem found.
ParseOutcome parse_config(std::string_view text);

/// Canonical text for a config; parse(serialize(c)) reproduces c.
std::string serialize_config(const ScanConfig& config);

/// Built-in configurations: "fig3" (10 um slit, 632.8 nm, Gaussian
/// sigma_z = 0.5 um) and "fig4" (4 um pinhole, 532.45 nm, Gaussian
/// sigma_z = 2/19 um). Throws std::invalid_argument for other names.
std::string preset_text(std::string_view name);
ScanConfig preset_config(std::string_view name);

struct ScanResult {
    ScanMode mode = ScanMode::in_plane;
    TheorySet theories;
    double wavelength_nm = 0.0;
    std::vector<PredictionPoint> rows;
};

/// Evaluates every requested prediction on the configured angle grid.
/// Rows are computed independently (optionally on several threads) and the
/// result is identical for any thread count. Grid mode emits steps^2 rows
/// in row-major theta_x order.
ScanResult run_scan(const ScanConfig& config, unsigned threads = 0);

/// Writes the scan as CSV: pinned header
/// theta_x_deg,theta_y_deg,T,L,Gamma,I_QM,I_FK,I_RS1,I_RS2[,I_Sommerfeld],
/// every value %.12e, LF line endings; byte-deterministic for a config.
void emit_csv(const ScanResult& result, std::ostream& out);
void emit_csv_file(const ScanResult& result, const std::string& path);

/// Writes a standalone SVG comparison plot of an in-plane scan: one
/// polyline per requested theory, decade-labelled log axis when log_scale
/// (values clamped at 1e-30 with an annotation), legend. Throws
/// std::invalid_argument for empty or grid-mode results.
void emit_svg(const ScanResult& result, std::ostream& out, bool log_scale);
void emit_svg_file(const ScanResult& result, const std::string& path, bool log_scale);

struct FraunhoferReport {
    double delta_um = 0.0;    // largest point radius of the aperture
    double ratio_d = 0.0;     // delta^2 / (lambda d)
    double ratio_s = 0.0;     // delta^2 / (lambda s)
    bool flagged_d = false;   // ratio >= 0.01
    bool flagged_s = false;
};

/// Far-field validity ratios for source and detector distances (mm).
FraunhoferReport fraunhofer_check(const ApertureShape& shape, double wavelength_um, double s_mm,
                                  double d_mm);

}  // namespace diffract
