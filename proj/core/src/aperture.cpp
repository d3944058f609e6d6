#include "diffract/aperture.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "diffract/kinematics.hpp"

namespace diffract {

namespace {

constexpr double kFreqEps = 1e-9;  // rad/um, switch to the small-frequency branch

// 2 J1(u) / u, the circle's radial profile; series below u = 1e-4 where the
// direct quotient loses accuracy.
double jinc(double u) {
    if (std::fabs(u) < 1e-4) {
        const double u2 = u * u;
        return 1.0 - u2 / 8.0 + u2 * u2 / 192.0 - u2 * u2 * u2 / 9216.0;
    }
    return 2.0 * bessel_j1(u) / u;
}

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p, double eps) {
    if (std::fabs(cross(a, b, p)) > eps) return false;
    return p.x >= std::min(a.x, b.x) - eps && p.x <= std::max(a.x, b.x) + eps &&
           p.y >= std::min(a.y, b.y) - eps && p.y <= std::max(a.y, b.y) + eps;
}

int sign_of(double v, double eps) { return v > eps ? 1 : (v < -eps ? -1 : 0); }

// Proper or improper intersection of segments (a,b) and (c,d).
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double eps) {
    const int d1 = sign_of(cross(a, b, c), eps);
    const int d2 = sign_of(cross(a, b, d), eps);
    const int d3 = sign_of(cross(c, d, a), eps);
    const int d4 = sign_of(cross(c, d, b), eps);
    if (d1 * d2 < 0 && d3 * d4 < 0) return true;
    if (d1 == 0 && on_segment(a, b, c, eps)) return true;
    if (d2 == 0 && on_segment(a, b, d, eps)) return true;
    if (d3 == 0 && on_segment(c, d, a, eps)) return true;
    if (d4 == 0 && on_segment(c, d, b, eps)) return true;
    return false;
}

double polygon_signed_area(const std::vector<Vec2>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2& p = v[i];
        const Vec2& q = v[(i + 1) % v.size()];
        s += p.x * q.y - q.x * p.y;
    }
    return 0.5 * s;
}

void validate_polygon(const std::vector<Vec2>& v) {
    if (v.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    double scale = 0.0;
    for (const Vec2& p : v) scale = std::max({scale, std::fabs(p.x), std::fabs(p.y)});
    const double eps = 1e-12 * std::max(scale * scale, 1.0);
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t i2 = (i + 1) % n;
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::size_t j2 = (j + 1) % n;
            if (i == j || i2 == j || i == j2) continue;  // adjacent edges share a vertex
            if (segments_intersect(v[i], v[i2], v[j], v[j2], eps))
                throw std::invalid_argument("polygon must be simple (non-self-intersecting)");
        }
    }
    const double signed_area = polygon_signed_area(v);
    if (!(std::fabs(signed_area) > 0.0))
        throw std::invalid_argument("polygon area must be positive");
    if (signed_area < 0.0)
        throw std::invalid_argument("polygon vertices must be counterclockwise");
}

// Shoelace-type closed forms for the indicator moments up to second order.
void polygon_moments(ApertureShape::Poly& poly) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    double a = 0, mx = 0, my = 0, ixx = 0, ixy = 0, iyy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = v[i];
        const Vec2& q = v[(i + 1) % n];
        const double c = p.x * q.y - q.x * p.y;
        a += c;
        mx += (p.x + q.x) * c;
        my += (p.y + q.y) * c;
        ixx += (p.x * p.x + p.x * q.x + q.x * q.x) * c;
        iyy += (p.y * p.y + p.y * q.y + q.y * q.y) * c;
        ixy += (p.x * q.y + 2.0 * p.x * p.y + 2.0 * q.x * q.y + q.x * p.y) * c;
    }
    poly.area = 0.5 * a;
    poly.mx = mx / 6.0;
    poly.my = my / 6.0;
    poly.ixx = ixx / 12.0;
    poly.iyy = iyy / 12.0;
    poly.ixy = ixy / 24.0;
}

bool poly_contains(const std::vector<Vec2>& v, double x, double y) {
    double scale = std::max(std::fabs(x), std::fabs(y));
    for (const Vec2& p : v) scale = std::max({scale, std::fabs(p.x), std::fabs(p.y)});
    const double eps = 1e-12 * std::max(scale * scale, 1.0);
    const Vec2 pt{x, y};
    bool inside = false;
    const std::size_t n = v.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if (on_segment(v[j], v[i], pt, eps)) return true;  // boundary counts inside
        const bool crosses = (v[i].y > y) != (v[j].y > y);
        if (crosses) {
            const double x_int = v[j].x + (v[i].x - v[j].x) * (y - v[j].y) / (v[i].y - v[j].y);
            if (x < x_int) inside = !inside;
        }
    }
    return inside;
}

std::complex<double> center_phase(const Vec2& c, double px, double py) {
    if (c.x == 0.0 && c.y == 0.0) return {1.0, 0.0};
    return std::polar(1.0, -(px * c.x + py * c.y));
}

// Exact edge sum for the polygon integral of exp[-i k.r]. Writing the
// integrand as a divergence and applying the divergence theorem, each
// counterclockwise edge (v1 -> v2, midpoint m, delta = v2 - v1) contributes
//   i (px dy - py dx) / |k|^2 * exp(-i k.m) * sinc(k.delta / 2).
// The sinc absorbs the k.delta -> 0 degeneracy; the only remaining special
// case is |k| -> 0, handled by a moment expansion accurate to O((|k| R)^3).
std::complex<double> polygon_raw_ft(const ApertureShape::Poly& poly, double px, double py) {
    const double k2 = px * px + py * py;
    if (std::sqrt(k2) < kFreqEps) {
        const std::complex<double> i_unit(0.0, 1.0);
        const double quad =
            0.5 * (px * px * poly.ixx + 2.0 * px * py * poly.ixy + py * py * poly.iyy);
        return poly.area - i_unit * (px * poly.mx + py * poly.my) - quad;
    }
    std::complex<double> sum(0.0, 0.0);
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = v[i];
        const Vec2& q = v[(i + 1) % n];
        const double dx = q.x - p.x;
        const double dy = q.y - p.y;
        const double flux = px * dy - py * dx;
        if (flux == 0.0) continue;
        const double k_dot_mid = 0.5 * (px * (p.x + q.x) + py * (p.y + q.y));
        const double k_dot_edge = px * dx + py * dy;
        sum += flux * std::polar(1.0, -k_dot_mid) * sinc(0.5 * k_dot_edge);
    }
    return std::complex<double>(0.0, 1.0) * sum / k2;
}

}  // namespace

ApertureShape::ApertureShape(Node node) : node_(std::move(node)) {
    area_ = std::visit(
        [](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Rect>) {
                return 4.0 * s.half_width * s.half_height;
            } else if constexpr (std::is_same_v<S, Circ>) {
                return M_PI * s.radius * s.radius;
            } else if constexpr (std::is_same_v<S, Poly>) {
                return s.area;
            } else {
                double sum = 0.0;
                for (const ApertureShape& m : s) sum += m.area();
                return sum;
            }
        },
        node_);
}

ApertureShape ApertureShape::rectangle(double half_width, double half_height, Vec2 center) {
    if (!(half_width > 0.0 && half_height > 0.0))
        throw std::invalid_argument("rectangle half sizes must be positive");
    return ApertureShape(Rect{half_width, half_height, center});
}

ApertureShape ApertureShape::circle(double radius, Vec2 center) {
    if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
    return ApertureShape(Circ{radius, center});
}

ApertureShape ApertureShape::polygon(std::vector<Vec2> vertices) {
    validate_polygon(vertices);
    Poly poly;
    poly.vertices = std::move(vertices);
    polygon_moments(poly);
    return ApertureShape(std::move(poly));
}

ApertureShape ApertureShape::disjoint_union(std::vector<ApertureShape> members) {
    if (members.size() < 2) throw std::invalid_argument("union needs at least 2 members");
    // Disjointness is a documented precondition: cheap bounding-box test,
    // then a seeded spot check on overlapping boxes.
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            const Box a = members[i].bounding_box();
            const Box b = members[j].bounding_box();
            const double x0 = std::max(a.x0, b.x0), x1 = std::min(a.x1, b.x1);
            const double y0 = std::max(a.y0, b.y0), y1 = std::min(a.y1, b.y1);
            if (x0 > x1 || y0 > y1) continue;
            CounterRng rng(0x5eedu + 1315423911u * i + j);
            for (int s = 0; s < 1000; ++s) {
                const double x = x0 + (x1 - x0) * rng.uniform(2 * s);
                const double y = y0 + (y1 - y0) * rng.uniform(2 * s + 1);
                if (members[i].contains(x, y) && members[j].contains(x, y))
                    throw std::invalid_argument("union members must be pairwise disjoint");
            }
        }
    }
    return ApertureShape(std::move(members));
}

double ApertureShape::area() const { return area_; }

bool ApertureShape::contains(double x, double y) const {
    return std::visit(
        [&](const auto& s) -> bool {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Rect>) {
                return std::fabs(x - s.center.x) <= s.half_width &&
                       std::fabs(y - s.center.y) <= s.half_height;
            } else if constexpr (std::is_same_v<S, Circ>) {
                const double dx = x - s.center.x;
                const double dy = y - s.center.y;
                return dx * dx + dy * dy <= s.radius * s.radius;
            } else if constexpr (std::is_same_v<S, Poly>) {
                return poly_contains(s.vertices, x, y);
            } else {
                for (const ApertureShape& m : s)
                    if (m.contains(x, y)) return true;
                return false;
            }
        },
        node_);
}

double ApertureShape::transverse_filter_value(double x, double y) const {
    return contains(x, y) ? 1.0 / area_ : 0.0;
}

std::complex<double> ApertureShape::raw_ft(double px, double py) const {
    return std::visit(
        [&](const auto& s) -> std::complex<double> {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Rect>) {
                return center_phase(s.center, px, py) * (4.0 * s.half_width * s.half_height) *
                       sinc(s.half_width * px) * sinc(s.half_height * py);
            } else if constexpr (std::is_same_v<S, Circ>) {
                const double rho = std::hypot(px, py);
                return center_phase(s.center, px, py) * (M_PI * s.radius * s.radius) *
                       jinc(rho * s.radius);
            } else if constexpr (std::is_same_v<S, Poly>) {
                return polygon_raw_ft(s, px, py);
            } else {
                std::complex<double> sum(0.0, 0.0);
                for (const ApertureShape& m : s) sum += m.raw_ft(px, py);
                return sum;
            }
        },
        node_);
}

std::complex<double> ApertureShape::transverse_ft(double px, double py) const {
    return raw_ft(px, py) / std::sqrt(area_);
}

double ApertureShape::transverse_term(double p, double theta_x, double theta_y) const {
    if (!(p > 0.0)) throw std::domain_error("transverse_term: wavenumber must be positive");
    const MomentumVec k = from_angles({p, theta_x, theta_y});
    const double mag = std::abs(raw_ft(k.px, k.py));
    return (mag / area_) * (mag / area_);
}

double ApertureShape::max_radius() const {
    return std::visit(
        [](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Rect>) {
                const double dx = std::fabs(s.center.x) + s.half_width;
                const double dy = std::fabs(s.center.y) + s.half_height;
                return std::hypot(dx, dy);
            } else if constexpr (std::is_same_v<S, Circ>) {
                return std::hypot(s.center.x, s.center.y) + s.radius;
            } else if constexpr (std::is_same_v<S, Poly>) {
                double r = 0.0;
                for (const Vec2& v : s.vertices) r = std::max(r, std::hypot(v.x, v.y));
                return r;
            } else {
                double r = 0.0;
                for (const ApertureShape& m : s) r = std::max(r, m.max_radius());
                return r;
            }
        },
        node_);
}

Vec2 ApertureShape::centroid() const {
    return std::visit(
        [&](const auto& s) -> Vec2 {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Rect>) {
                return s.center;
            } else if constexpr (std::is_same_v<S, Circ>) {
                return s.center;
            } else if constexpr (std::is_same_v<S, Poly>) {
                return {s.mx / s.area, s.my / s.area};
            } else {
                Vec2 c{0.0, 0.0};
                for (const ApertureShape& m : s) {
                    const Vec2 mc = m.centroid();
                    c.x += mc.x * m.area();
                    c.y += mc.y * m.area();
                }
                return {c.x / area_, c.y / area_};
            }
        },
        node_);
}

ApertureShape::Box ApertureShape::bounding_box() const {
    return std::visit(
        [](const auto& s) -> Box {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Rect>) {
                return {s.center.x - s.half_width, s.center.x + s.half_width,
                        s.center.y - s.half_height, s.center.y + s.half_height};
            } else if constexpr (std::is_same_v<S, Circ>) {
                return {s.center.x - s.radius, s.center.x + s.radius, s.center.y - s.radius,
                        s.center.y + s.radius};
            } else if constexpr (std::is_same_v<S, Poly>) {
                Box b{s.vertices[0].x, s.vertices[0].x, s.vertices[0].y, s.vertices[0].y};
                for (const Vec2& v : s.vertices) {
                    b.x0 = std::min(b.x0, v.x);
                    b.x1 = std::max(b.x1, v.x);
                    b.y0 = std::min(b.y0, v.y);
                    b.y1 = std::max(b.y1, v.y);
                }
                return b;
            } else {
                Box b = s.front().bounding_box();
                for (const ApertureShape& m : s) {
                    const Box mb = m.bounding_box();
                    b.x0 = std::min(b.x0, mb.x0);
                    b.x1 = std::max(b.x1, mb.x1);
                    b.y0 = std::min(b.y0, mb.y0);
                    b.y1 = std::max(b.y1, mb.y1);
                }
                return b;
            }
        },
        node_);
}

FtMcEstimate transverse_ft_mc_oracle(const ApertureShape& shape, double px, double py,
                                     const McSpec& spec) {
    const ApertureShape::Box box = shape.bounding_box();
    const BoxRegion region{box.x0, box.x1, box.y0, box.y1};
    const double inv_sqrt_area = 1.0 / std::sqrt(shape.area());
    auto f = [&](double x, double y) -> std::complex<double> {
        if (!shape.contains(x, y)) return {0.0, 0.0};
        return std::polar(1.0, -(px * x + py * y));
    };
    McComplexEstimate est = integrate_2d_mc_complex(f, region, spec);
    return {est.value * inv_sqrt_area, est.std_error_re * inv_sqrt_area,
            est.std_error_im * inv_sqrt_area};
}

}  // namespace diffract
