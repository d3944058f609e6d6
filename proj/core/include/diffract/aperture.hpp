#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "diffract/numerics.hpp"

namespace diffract {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Plane aperture: rectangle, circle, simple polygon, or a disjoint union
/// of those. Lengths in um. Immutable after construction; construction
/// validates dimensions, polygon simplicity/orientation and (by bounding
/// box plus a seeded spot check) union disjointness.
class ApertureShape {
public:
    struct Rect {
        double half_width = 0.0;   // a
        double half_height = 0.0;  // b
        Vec2 center;
    };
    struct Circ {
        double radius = 0.0;
        Vec2 center;
    };
    struct Poly {
        std::vector<Vec2> vertices;  // simple, counterclockwise
        // Cached low-order moments of the indicator (area, first, second),
        // used by the small-frequency branch of the Fourier transform.
        double area = 0.0;
        double mx = 0.0, my = 0.0;
        double ixx = 0.0, ixy = 0.0, iyy = 0.0;
    };
    using UnionList = std::vector<ApertureShape>;
    using Node = std::variant<Rect, Circ, Poly, UnionList>;

    static ApertureShape rectangle(double half_width, double half_height, Vec2 center = {});
    static ApertureShape circle(double radius, Vec2 center = {});
    static ApertureShape polygon(std::vector<Vec2> vertices);
    static ApertureShape disjoint_union(std::vector<ApertureShape> members);

    /// Exact area: 4ab, pi r^2, shoelace, or sum over union members.
    double area() const;

    /// Point-in-shape with the boundary counted inside.
    bool contains(double x, double y) const;

    /// Uniform position weight: 1/area inside, 0 outside (um^-2).
    double transverse_filter_value(double x, double y) const;

    /// area^{-1/2} * integral over the aperture of exp[-i(px x + py y)],
    /// in um. Real and equal to sqrt(area) at zero frequency; closed forms
    /// for rectangle (sinc product) and circle (J1 form), exact analytic
    /// edge sum for polygons, member sum for unions.
    std::complex<double> transverse_ft(double px, double py) const;

    /// Normalized squared Fourier modulus T in [0, 1] at the Cartesian
    /// frequencies belonging to direction (theta_x, theta_y) for wavenumber
    /// modulus p: T = |FT(p cos(chi) tan tx, p cos(chi) tan ty)|^2 / area.
    double transverse_term(double p, double theta_x, double theta_y) const;

    /// Raw aperture integral of exp[-i(px x + py y)] without the area
    /// normalization (um^2).
    std::complex<double> raw_ft(double px, double py) const;

    /// max over the aperture of sqrt(x^2 + y^2); the size entering the
    /// far-field criterion.
    double max_radius() const;

    Vec2 centroid() const;

    struct Box {
        double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    };
    Box bounding_box() const;

    const Node& node() const { return node_; }
    const Rect* as_rectangle() const { return std::get_if<Rect>(&node_); }

private:
    explicit ApertureShape(Node node);
    Node node_;
    double area_ = 0.0;
};

struct FtMcEstimate {
    std::complex<double> value;
    double std_error_re = 0.0;
    double std_error_im = 0.0;
};

/// Monte Carlo cross-check of ApertureShape::transverse_ft: uniform points
/// in the bounding box against the indicator. Deterministic given the seed.
FtMcEstimate transverse_ft_mc_oracle(const ApertureShape& shape, double px, double py,
                                     const McSpec& spec);

}  // namespace diffract
