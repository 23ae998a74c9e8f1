#include "flowgnn/airfoil.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace flowgnn {

namespace {

constexpr double kPi = std::numbers::pi;
// Transform z = zeta + c^2/zeta with c = 1; all raw-plane lengths are in
// units of c and the unit-chord rescale absorbs the remaining freedom.
constexpr std::complex<double> kC{1.0, 0.0};

std::complex<double> joukowski_map(std::complex<double> zeta) { return zeta + 1.0 / zeta; }

} // namespace

JoukowskiFlow::JoukowskiFlow(const AirfoilSpec& spec) : spec_(spec) {
    if (!(spec.mu_x <= -1e-3))
        throw std::invalid_argument(
            "degenerate airfoil: mu_x must be negative (flat-plate or self-intersecting limit)");
    if (!(spec.mu_x >= -0.6) || !(std::abs(spec.mu_y) <= 0.45))
        throw std::invalid_argument("airfoil circle center out of supported range");
    if (!(std::abs(spec.alpha_deg) <= 30.0))
        throw std::invalid_argument("angle of attack out of supported range");
    if (!(spec.u_inf > 0.0) || !(spec.rho > 0.0))
        throw std::invalid_argument("free-stream speed and density must be positive");

    mu_ = {spec.mu_x, spec.mu_y};
    radius_ = std::abs(kC - mu_);
    beta_ = std::atan2(spec.mu_y, 1.0 - spec.mu_x);
    alpha_ = spec.alpha_deg * kPi / 180.0;
    gamma_raw_ = 4.0 * kPi * spec.u_inf * radius_ * std::sin(alpha_ + beta_);

    // Leading edge: minimize raw x over the circle. Coarse scan brackets the
    // minimum, golden-section refines it to machine precision; the trailing
    // edge is exactly x = 2 (zeta = c).
    const auto raw_x = [this](double theta) {
        return joukowski_map(mu_ + radius_ * std::polar(1.0, theta)).real();
    };
    const int scan = 1024;
    double best_theta = kPi;
    double best_x = raw_x(kPi);
    for (int i = 0; i < scan; ++i) {
        const double theta = 2.0 * kPi * i / scan;
        const double x = raw_x(theta);
        if (x < best_x) {
            best_x = x;
            best_theta = theta;
        }
    }
    const double step = 2.0 * kPi / scan;
    double lo = best_theta - step;
    double hi = best_theta + step;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double fa = raw_x(a);
    double fb = raw_x(b);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = raw_x(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = raw_x(b);
        }
    }
    theta_le_ = 0.5 * (lo + hi);
    x_shift_ = raw_x(theta_le_);
    scale_ = 2.0 - x_shift_;
    if (!(scale_ > 0.5))
        throw std::invalid_argument("degenerate airfoil: chord collapsed");
}

std::array<double, 2> JoukowskiFlow::lift_direction() const {
    return {-std::sin(alpha_), std::cos(alpha_)};
}

std::array<double, 2> JoukowskiFlow::drag_direction() const {
    return {std::cos(alpha_), std::sin(alpha_)};
}

std::complex<double> JoukowskiFlow::dw_dzeta(std::complex<double> zeta) const {
    const std::complex<double> rel = zeta - mu_;
    const std::complex<double> i{0.0, 1.0};
    return spec_.u_inf * (std::polar(1.0, -alpha_) -
                          std::polar(1.0, alpha_) * radius_ * radius_ / (rel * rel)) +
           i * gamma_raw_ / (2.0 * kPi * rel);
}

std::complex<double> JoukowskiFlow::map_velocity(std::complex<double> zeta) const {
    const std::complex<double> dz = 1.0 - 1.0 / (zeta * zeta);
    return dw_dzeta(zeta) / dz;
}

std::array<double, 2> JoukowskiFlow::boundary_point(double theta) const {
    const std::complex<double> z = joukowski_map(mu_ + radius_ * std::polar(1.0, theta));
    return {(z.real() - x_shift_) / scale_, z.imag() / scale_};
}

std::array<double, 2> JoukowskiFlow::boundary_velocity(double theta) const {
    const std::complex<double> w = map_velocity(mu_ + radius_ * std::polar(1.0, theta));
    return {w.real(), -w.imag()};
}

std::pair<std::complex<double>, double> JoukowskiFlow::preimage(double x, double y) const {
    const std::complex<double> z{x * scale_ + x_shift_, y * scale_};
    const std::complex<double> half = z / 2.0;
    const std::complex<double> root = std::sqrt(half * half - 1.0);
    const std::complex<double> zeta1 = half + root;
    const std::complex<double> zeta2 = half - root;
    const double d1 = std::abs(zeta1 - mu_);
    const double d2 = std::abs(zeta2 - mu_);
    if (d1 >= d2)
        return {zeta1, d1 / radius_};
    return {zeta2, d2 / radius_};
}

std::array<double, 2> JoukowskiFlow::velocity(double x, double y) const {
    const auto [zeta, rel_dist] = preimage(x, y);
    if (rel_dist <= 1.0 + 1e-10)
        throw std::invalid_argument("potential_velocity: point inside or on the airfoil");
    const std::complex<double> w = map_velocity(zeta);
    return {w.real(), -w.imag()};
}

bool JoukowskiFlow::inside(double x, double y) const { return preimage(x, y).second < 1.0; }

namespace {

/// Vertex angles for an m-panel boundary: uniform from the trailing edge,
/// with the vertex nearest the leading edge snapped onto it so the polyline
/// attains the exact chord extremes.
std::vector<double> boundary_angles(const JoukowskiFlow& flow, std::size_t m) {
    std::vector<double> angles(m);
    for (std::size_t i = 0; i < m; ++i)
        angles[i] = flow.te_angle() + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(m);
    double le = flow.le_angle();
    // Shift le into [te, te + 2pi).
    while (le < angles[0])
        le += 2.0 * kPi;
    while (le >= angles[0] + 2.0 * kPi)
        le -= 2.0 * kPi;
    std::size_t nearest = static_cast<std::size_t>(
        std::llround((le - angles[0]) * static_cast<double>(m) / (2.0 * kPi)));
    if (nearest == 0 || nearest >= m)
        nearest = m / 2;
    angles[nearest] = le;
    return angles;
}

} // namespace

std::vector<std::array<double, 2>> joukowski_boundary(const AirfoilSpec& spec, std::size_t panels) {
    if (panels < 16)
        throw std::invalid_argument("joukowski_boundary: need at least 16 panels");
    const JoukowskiFlow flow(spec);
    const auto angles = boundary_angles(flow, panels);
    std::vector<std::array<double, 2>> points(panels);
    for (std::size_t i = 0; i < panels; ++i)
        points[i] = flow.boundary_point(angles[i]);
    return points;
}

std::array<double, 2> potential_velocity(const AirfoilSpec& spec, std::array<double, 2> point) {
    return JoukowskiFlow(spec).velocity(point[0], point[1]);
}

double lift_oracle(const AirfoilSpec& spec) { return JoukowskiFlow(spec).lift(); }

std::vector<SurfaceSample> bernoulli_surface_samples(const AirfoilSpec& spec, std::size_t panels) {
    if (panels < 16)
        throw std::invalid_argument("bernoulli_surface_samples: need at least 16 panels");
    const JoukowskiFlow flow(spec);
    const auto angles = boundary_angles(flow, panels);
    std::vector<std::array<double, 2>> verts(panels);
    for (std::size_t i = 0; i < panels; ++i)
        verts[i] = flow.boundary_point(angles[i]);

    double area2 = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        const auto& p0 = verts[i];
        const auto& p1 = verts[(i + 1) % panels];
        area2 += p0[0] * p1[1] - p1[0] * p0[1];
    }
    const double orient = area2 >= 0.0 ? 1.0 : -1.0;

    std::vector<SurfaceSample> samples(panels);
    for (std::size_t i = 0; i < panels; ++i) {
        const auto& p0 = verts[i];
        const auto& p1 = verts[(i + 1) % panels];
        const double ex = p1[0] - p0[0];
        const double ey = p1[1] - p0[1];
        const double len = std::hypot(ex, ey);
        const double theta_next = i + 1 < panels ? angles[i + 1] : angles[0] + 2.0 * kPi;
        const double theta_mid = 0.5 * (angles[i] + theta_next);
        const auto vel = flow.boundary_velocity(theta_mid);
        const double q2 = vel[0] * vel[0] + vel[1] * vel[1];
        const double pressure = 0.5 * spec.rho * (spec.u_inf * spec.u_inf - q2);

        SurfaceSample& s = samples[i];
        s.point = {0.5 * (p0[0] + p1[0]), 0.5 * (p0[1] + p1[1])};
        s.normal = {orient * ey / len, -orient * ex / len};
        s.ds = len;
        s.stress = {-pressure, 0.0, 0.0, -pressure};
    }
    return samples;
}

double surface_force_integral(const std::vector<SurfaceSample>& samples,
                              std::array<double, 2> direction) {
    if (samples.empty())
        throw std::invalid_argument("surface_force_integral: no panels");
    double closure_x = 0.0;
    double closure_y = 0.0;
    double perimeter = 0.0;
    for (const auto& s : samples) {
        // Traversal tangent reconstructed from the outward normal.
        closure_x += -s.normal[1] * s.ds;
        closure_y += s.normal[0] * s.ds;
        perimeter += s.ds;
    }
    if (std::hypot(closure_x, closure_y) > 1e-9 * perimeter)
        throw std::invalid_argument("surface_force_integral: panel loop does not close");

    double force = 0.0;
    for (const auto& s : samples) {
        const double tx = s.stress[0] * s.normal[0] + s.stress[1] * s.normal[1];
        const double ty = s.stress[2] * s.normal[0] + s.stress[3] * s.normal[1];
        force += (tx * direction[0] + ty * direction[1]) * s.ds;
    }
    return force;
}

} // namespace flowgnn
