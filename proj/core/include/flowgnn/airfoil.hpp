#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace flowgnn {

/// Joukowski airfoil in a free stream. The circle center (mu_x, mu_y) sets
/// thickness (mu_x < 0) and camber (mu_y); the profile is rescaled to unit
/// chord on x in [0,1]. Angle of attack rotates the free stream, not the
/// geometry.
struct AirfoilSpec {
    double mu_x = -0.08;
    double mu_y = 0.04;
    double alpha_deg = 0.0;
    double u_inf = 1.5;
    double rho = 1.0;
};

/// Boundary point with outward normal, panel length and Cauchy stress,
/// traversed counterclockwise around a closed loop.
struct SurfaceSample {
    std::array<double, 2> point;
    std::array<double, 2> normal;
    double ds = 0.0;
    /// Row-major 2x2 stress tensor.
    std::array<double, 4> stress{};
};

/// Closed-form potential flow past a Joukowski airfoil, unit-chord scaled.
/// Circulation is fixed by the Kutta condition at the trailing edge.
class JoukowskiFlow {
public:
    explicit JoukowskiFlow(const AirfoilSpec& spec);

    const AirfoilSpec& spec() const { return spec_; }
    /// Raw-plane chord length (the unit-chord scale factor).
    double chord_scale() const { return scale_; }
    /// Circulation in the unit-chord frame.
    double circulation() const { return gamma_raw_ / scale_; }
    /// Kutta-Joukowski lift rho*U*Gamma (force per unit span, unit-chord frame).
    double lift() const { return spec_.rho * spec_.u_inf * circulation(); }
    /// Unit vectors perpendicular/parallel to the free stream.
    std::array<double, 2> lift_direction() const;
    std::array<double, 2> drag_direction() const;

    /// Circle angle of the trailing-edge preimage.
    double te_angle() const { return -beta_; }
    /// Circle angle mapping to the leading edge (minimum x).
    double le_angle() const { return theta_le_; }

    std::array<double, 2> boundary_point(double theta) const;
    /// On-surface velocity; singular only at the trailing-edge angle itself.
    std::array<double, 2> boundary_velocity(double theta) const;

    /// Velocity at a field point; throws when the point is inside or on the
    /// profile.
    std::array<double, 2> velocity(double x, double y) const;
    bool inside(double x, double y) const;

private:
    std::complex<double> dw_dzeta(std::complex<double> zeta) const;
    std::complex<double> map_velocity(std::complex<double> zeta) const;
    /// Preimage of a unit-chord-frame point, the root outside the circle;
    /// second member is |zeta - mu| / R.
    std::pair<std::complex<double>, double> preimage(double x, double y) const;

    AirfoilSpec spec_;
    std::complex<double> mu_;
    double radius_ = 0.0;
    double beta_ = 0.0;
    double alpha_ = 0.0;
    double gamma_raw_ = 0.0;
    double scale_ = 1.0;
    double x_shift_ = 0.0;
    double theta_le_ = 0.0;
};

/// m boundary points, counterclockwise from the trailing edge, with one
/// vertex snapped onto the exact leading edge so the polyline spans [0,1]
/// in x. Rejects degenerate (flat-plate or self-intersecting) parameters.
std::vector<std::array<double, 2>> joukowski_boundary(const AirfoilSpec& spec, std::size_t panels);

/// Flow velocity at a point strictly outside the profile.
std::array<double, 2> potential_velocity(const AirfoilSpec& spec, std::array<double, 2> point);

/// Exact lift (N per unit span) from the Kutta condition.
double lift_oracle(const AirfoilSpec& spec);

/// Panels with sigma = -p I, p from Bernoulli against the free stream,
/// velocities sampled at panel mid-angles on the true curve.
std::vector<SurfaceSample> bernoulli_surface_samples(const AirfoilSpec& spec, std::size_t panels);

/// Sum of ((sigma . n) . direction) dS over a closed panel loop. Throws if
/// the reconstructed loop fails to close.
double surface_force_integral(const std::vector<SurfaceSample>& samples,
                              std::array<double, 2> direction);

} // namespace flowgnn
