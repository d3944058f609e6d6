// Command-line front end: angle scans to CSV/SVG, the numerical
// self-check suite, and the far-field validity report.
//
// Exit codes: 0 success, 1 validation failure, 2 numerical-check failure,
// 3 I/O failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "diffract/scan.hpp"
#include "diffract/selfcheck.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_scan_command(const std::string& config_path, const std::string& preset,
                     const std::string& out_path, const std::string& svg_path, bool log_scale,
                     unsigned threads) {
    if (config_path.empty() && preset.empty()) {
        std::cerr << "scan: need --config FILE and/or --preset fig3|fig4\n";
        return kExitValidation;
    }

    std::string text;
    try {
        if (!preset.empty()) text = diffract::preset_text(preset);
    } catch (const std::exception& e) {
        std::cerr << "scan: " << e.what() << "\n";
        return kExitValidation;
    }
    if (!config_path.empty()) {
        try {
            // Config file keys override the preset baseline line by line.
            text += read_file(config_path);
        } catch (const std::exception& e) {
            std::cerr << "scan: " << e.what() << "\n";
            return kExitIo;
        }
    }

    diffract::ParseOutcome outcome = diffract::parse_config(text);
    for (const std::string& warning : outcome.warnings)
        std::cerr << "warning: " << warning << "\n";
    if (!outcome.config.has_value()) {
        for (const std::string& error : outcome.errors) std::cerr << "error: " << error << "\n";
        return kExitValidation;
    }
    diffract::ScanConfig config = std::move(*outcome.config);
    if (!out_path.empty()) config.output = out_path;
    if (!svg_path.empty()) config.svg_output = svg_path;
    if (log_scale) config.svg_log = true;

    const diffract::ScanResult result = diffract::run_scan(config, threads);
    try {
        if (config.output.empty()) {
            diffract::emit_csv(result, std::cout);
        } else {
            diffract::emit_csv_file(result, config.output);
            std::cerr << "wrote " << config.output << " (" << result.rows.size() << " rows)\n";
        }
        if (!config.svg_output.empty()) {
            diffract::emit_svg_file(result, config.svg_output, config.svg_log);
            std::cerr << "wrote " << config.svg_output << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "scan: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int run_check_command(bool quick) {
    diffract::CheckOptions options;
    options.quick = quick;
    const std::vector<diffract::CriterionResult> results = diffract::run_self_check(options);
    int failed = 0;
    for (const diffract::CriterionResult& r : results) {
        std::printf("[%2d] %-52s %s  %7.2f s\n     %s\n", r.id, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
        if (!r.pass) ++failed;
    }
    std::printf("%d/%zu checks passed\n", static_cast<int>(results.size()) - failed,
                results.size());
    return failed == 0 ? kExitOk : kExitNumerical;
}

int run_fraunhofer_command(const std::string& config_path, double s_mm, double d_mm) {
    std::string text;
    try {
        text = read_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "fraunhofer: " << e.what() << "\n";
        return kExitIo;
    }
    diffract::ParseOutcome outcome = diffract::parse_config(text);
    if (!outcome.config.has_value()) {
        for (const std::string& error : outcome.errors) std::cerr << "error: " << error << "\n";
        return kExitValidation;
    }
    const diffract::ScanConfig& config = *outcome.config;
    const double lambda_um = config.wavelength_nm * 1e-3;
    const diffract::FraunhoferReport report =
        diffract::fraunhofer_check(config.shape, lambda_um, s_mm, d_mm);
    std::printf("aperture size           : %.6g um\n", report.delta_um);
    std::printf("delta^2 / (lambda d)    : %.6g  [%s]\n", report.ratio_d,
                report.flagged_d ? "FLAGGED >= 0.01" : "pass");
    std::printf("delta^2 / (lambda s)    : %.6g  [%s]\n", report.ratio_s,
                report.flagged_s ? "FLAGGED >= 0.01" : "pass");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Far-field diffraction predictions over the full 0-90 degree range"};
    app.require_subcommand(1);

    std::string config_path, preset, out_path, svg_path;
    bool log_scale = false;
    unsigned threads = 0;
    CLI::App* scan = app.add_subcommand("scan", "Run an angle scan and write CSV (and SVG)");
    scan->add_option("--config", config_path, "Scan description file");
    scan->add_option("--preset", preset, "Built-in configuration: fig3 or fig4");
    scan->add_option("--out", out_path, "CSV output path (default: config's, else stdout)");
    scan->add_option("--svg", svg_path, "Also write an SVG comparison plot");
    scan->add_flag("--log", log_scale, "Logarithmic intensity axis for the SVG");
    scan->add_option("--threads", threads, "Worker threads (0 = hardware)");

    bool quick = false;
    CLI::App* check = app.add_subcommand("check", "Run the numerical self-check suite");
    check->add_flag("--quick", quick, "Reduced quadrature budget for the density check");

    std::string fr_config;
    double s_mm = 0.0, d_mm = 0.0;
    CLI::App* fraunhofer =
        app.add_subcommand("fraunhofer", "Report the far-field validity ratios");
    fraunhofer->add_option("--config", fr_config, "Scan description file")->required();
    fraunhofer->add_option("--s-mm", s_mm, "Source distance in mm")->required();
    fraunhofer->add_option("--d-mm", d_mm, "Detector distance in mm")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (scan->parsed())
            return run_scan_command(config_path, preset, out_path, svg_path, log_scale, threads);
        if (check->parsed()) return run_check_command(quick);
        if (fraunhofer->parsed()) return run_fraunhofer_command(fr_config, s_mm, d_mm);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
