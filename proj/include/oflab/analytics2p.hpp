#pragma once

// Closed-form small-noise limits for two particles. Throughout, b_minus and
// b_plus are the gap drifts b_1(12) - b_2(12) and b_1(21) - b_2(21), the
// gap is z = x_1 - x_2, x_minus(t) = x0 + b(12) t and x_plus(t) = x0 + b(21) t.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "oflab/drift.hpp"
#include "oflab/trajectory.hpp"

namespace oflab {

/// -b_minus / (b_plus - b_minus): in the diverging/diverging case, the
/// limit probability that the pair follows x_minus, i.e. ends in ordering
/// (12). Throws unless b_minus < 0 < b_plus.
double bernoulli_weight(double b_minus, double b_plus);

/// -b_plus / (b_minus - b_plus): in the converging/converging case, the
/// limit fraction of time spent in ordering (12). Throws when
/// b_minus - b_plus is not positive.
double cluster_time_fraction(double b_minus, double b_plus);

/// Velocity of the two-particle cluster. Requires the converging/converging
/// case with b_minus > b_plus.
double cluster_velocity2(const DriftSpec& spec);

struct TwoParticleLimit {
    TwoParticleClass cls = TwoParticleClass::DegenerateZero;
    double b_minus = 0.0;
    double b_plus = 0.0;
    /// Weight on x_minus: selection probability (DivDiv), time fraction
    /// (ConvConv with b_minus > b_plus), 1 or 0 for the mixed classes; empty
    /// for the degenerate case where the weight is Arcsine distributed.
    std::optional<double> rho;
    std::optional<double> velocity;  // ConvConv with b_minus > b_plus
    std::vector<double> b12;
    std::vector<double> b21;

    std::vector<double> x_minus(std::span<const double> x0, double t) const;
    std::vector<double> x_plus(std::span<const double> x0, double t) const;
};

TwoParticleLimit two_particle_limit(const DriftSpec& spec);

/// Limit of the gap started at z0 != 0: follow the drift of the starting
/// side until the origin, then stick if the other side converges or cross
/// it otherwise. Throws on z0 == 0.
double limit_gap(double z0, double b_minus, double b_plus, double t);
ScalarPath limit_path_z(double z0, double b_minus, double b_plus, std::span<const double> grid);

/// A drift branch near the origin, optionally known to be constant.
struct Branch {
    std::function<double(double)> f;
    std::optional<double> constant;

    static Branch constant_value(double c);
    static Branch function(std::function<double(double)> f);

    double operator()(double y) const { return constant ? *constant : f(y); }
    /// Integral of the branch from 0 to y (y may be negative).
    double integral(double y) const;
};

/// Largest admissible exit radius: the first zero of a_plus on (0, 1] or of
/// a_minus on [-1, 0), capped at 1.
double exit_radius_bound(const Branch& a_minus, const Branch& a_plus);

/// Probability that the gap started at 0 leaves (-delta, delta) through
/// +delta. Requires a_minus(0) < 0 < a_plus(0) and delta below the bound.
double hitting_prob(const Branch& a_minus, const Branch& a_plus, double delta, double eps);

/// Closed form of hitting_prob for constant branches a_plus = c_plus > 0,
/// a_minus = c_minus < 0.
double hitting_prob_constant(double c_minus, double c_plus, double delta, double eps);

/// E[exp(-alpha tau)] for tau the hitting time of 0 by the gap started at
/// z0 > 0 with drift b_plus and diffusion 2 sqrt(eps).
double laplace_hitting_time(double z0, double b_plus, double eps, double alpha);

/// Zero-noise limit of u(t, z) = E[u0(Z(t))] for the gap started at z.
/// Defined for the DivDiv and ConvConv classes (and the degenerate one);
/// throws std::invalid_argument for the mixed classes.
double pde_limit_u(const std::function<double(double)>& u0, double t, double z, double b_minus, double b_plus);

}  // namespace oflab
