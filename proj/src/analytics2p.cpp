#include "oflab/analytics2p.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oflab/quadrature.hpp"

namespace oflab {

double bernoulli_weight(double b_minus, double b_plus) {
    if (!(b_minus < 0.0 && b_plus > 0.0)) {
        throw std::invalid_argument("bernoulli_weight needs b_minus < 0 < b_plus");
    }
    return -b_minus / (b_plus - b_minus);
}

double cluster_time_fraction(double b_minus, double b_plus) {
    if (!(b_minus - b_plus > 0.0)) throw std::invalid_argument("cluster time fraction needs b_minus > b_plus");
    return -b_plus / (b_minus - b_plus);
}

double cluster_velocity2(const DriftSpec& spec) {
    const auto info = classify_two_particle(spec);
    if (info.cls != TwoParticleClass::ConvConv) throw std::invalid_argument("cluster velocity needs ConvConv drift");
    const auto b12 = spec.velocity(Permutation({1, 2}));
    const auto b21 = spec.velocity(Permutation({2, 1}));
    const double denom = b12[0] - b12[1] - b21[0] + b21[1];
    if (!(denom > 0.0)) throw std::invalid_argument("cluster velocity is undefined when b_minus = b_plus");
    const double v = (b21[1] * b12[0] - b12[1] * b21[0]) / denom;
    const double rho = cluster_time_fraction(info.b_minus, info.b_plus);
    const double v_interp = rho * b12[0] + (1.0 - rho) * b21[0];
    const double scale = std::max({1.0, std::abs(b12[0]), std::abs(b12[1]), std::abs(b21[0]), std::abs(b21[1])});
    if (std::abs(v - v_interp) > 1e-12 * scale) {
        throw std::logic_error("cluster velocity formulas disagree");
    }
    return v;
}

std::vector<double> TwoParticleLimit::x_minus(std::span<const double> x0, double t) const {
    return {x0[0] + b12[0] * t, x0[1] + b12[1] * t};
}

std::vector<double> TwoParticleLimit::x_plus(std::span<const double> x0, double t) const {
    return {x0[0] + b21[0] * t, x0[1] + b21[1] * t};
}

TwoParticleLimit two_particle_limit(const DriftSpec& spec) {
    const auto info = classify_two_particle(spec);
    TwoParticleLimit lim;
    lim.cls = info.cls;
    lim.b_minus = info.b_minus;
    lim.b_plus = info.b_plus;
    lim.b12 = spec.velocity(Permutation({1, 2}));
    lim.b21 = spec.velocity(Permutation({2, 1}));
    switch (info.cls) {
        case TwoParticleClass::DivDiv:
            lim.rho = bernoulli_weight(info.b_minus, info.b_plus);
            break;
        case TwoParticleClass::ConvConv:
            if (info.b_minus > info.b_plus) {
                lim.rho = cluster_time_fraction(info.b_minus, info.b_plus);
                lim.velocity = cluster_velocity2(spec);
            }
            break;
        case TwoParticleClass::ConvDiv:
            lim.rho = 0.0;
            break;
        case TwoParticleClass::DivCon:
            lim.rho = 1.0;
            break;
        case TwoParticleClass::DegenerateZero:
            break;
    }
    return lim;
}

double limit_gap(double z0, double b_minus, double b_plus, double t) {
    if (z0 == 0.0) throw std::invalid_argument("the gap limit from z0 = 0 is not a single path");
    if (z0 < 0.0) return -limit_gap(-z0, -b_plus, -b_minus, t);
    if (b_plus >= 0.0) return z0 + b_plus * t;
    const double t_hit = z0 / -b_plus;
    if (t < t_hit) return z0 + b_plus * t;
    if (b_minus >= 0.0) return 0.0;
    return b_minus * (t - t_hit);
}

ScalarPath limit_path_z(double z0, double b_minus, double b_plus, std::span<const double> grid) {
    ScalarPath p;
    for (double t : grid) {
        p.times.push_back(t);
        p.values.push_back(limit_gap(z0, b_minus, b_plus, t));
    }
    return p;
}

Branch Branch::constant_value(double c) {
    Branch b;
    b.constant = c;
    b.f = [c](double) { return c; };
    return b;
}

Branch Branch::function(std::function<double(double)> f) {
    Branch b;
    b.f = std::move(f);
    return b;
}

double Branch::integral(double y) const {
    if (constant) return *constant * y;
    if (y == 0.0) return 0.0;
    if (y > 0.0) return adaptive_simpson(f, 0.0, y, 1e-13);
    return -adaptive_simpson(f, y, 0.0, 1e-13);
}

namespace {

constexpr double kScanStep = 1e-6;

// First y in (0, 1] where sign * g(sign * y) <= 0, or 1 when there is none.
double first_zero(const Branch& g, double sign) {
    if (g.constant) return 1.0;
    auto bad = [&](double y) { return sign * g(sign * y) <= 0.0; };
    const auto steps = static_cast<long>(std::lround(1.0 / kScanStep));
    double prev = 0.0;
    for (long k = 1; k <= steps; ++k) {
        const double y = k * kScanStep;
        if (bad(y)) {
            double lo = prev;
            double hi = y;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (bad(mid)) hi = mid;
                else lo = mid;
            }
            return hi;
        }
        prev = y;
    }
    return 1.0;
}

// Integral over [0, delta] of exp(exponent(y)), where exponent decreases
// from 0 on a length scale `scale`. Panels double in width away from the
// origin so the boundary layer is resolved whatever eps is.
double layered_integral(const std::function<double(double)>& exponent, double delta, double scale) {
    double total = 0.0;
    double a = 0.0;
    double width = std::min(delta, scale);
    auto integrand = [&](double y) { return std::exp(exponent(y)); };
    while (a < delta) {
        const double b = std::min(delta, a + width);
        if (exponent(a) < -745.0) break;  // exp underflows from here on
        total += adaptive_simpson(integrand, a, b, 1e-13);
        a = b;
        width *= 2.0;
    }
    return total;
}

}  // namespace

double exit_radius_bound(const Branch& a_minus, const Branch& a_plus) {
    return std::min(first_zero(a_plus, 1.0), first_zero(a_minus, -1.0));
}

double hitting_prob(const Branch& a_minus, const Branch& a_plus, double delta, double eps) {
    const double am0 = a_minus(0.0);
    const double ap0 = a_plus(0.0);
    if (!(am0 < 0.0 && ap0 > 0.0)) throw std::invalid_argument("hitting_prob needs a_minus(0) < 0 < a_plus(0)");
    if (!(eps > 0.0)) throw std::invalid_argument("hitting_prob needs eps > 0");
    if (!(delta > 0.0)) throw std::invalid_argument("hitting_prob needs delta > 0");
    if (delta >= exit_radius_bound(a_minus, a_plus)) {
        throw std::invalid_argument("delta is not below the first zero of the drift branches");
    }
    // Both exponents are zero at the origin and strictly decreasing on
    // [0, delta], so every integrand lies in (0, 1].
    const double inv = 1.0 / (2.0 * eps);
    auto exp_up = [&](double y) { return -inv * a_plus.integral(y); };
    auto exp_down = [&](double u) { return inv * -a_minus.integral(-u); };
    const double up = layered_integral(exp_up, delta, 2.0 * eps / ap0);
    const double down = layered_integral(exp_down, delta, 2.0 * eps / -am0);
    return 1.0 / (1.0 + up / down);
}

double hitting_prob_constant(double c_minus, double c_plus, double delta, double eps) {
    if (!(c_minus < 0.0 && c_plus > 0.0)) throw std::invalid_argument("need c_minus < 0 < c_plus");
    const double up = 2.0 * eps / c_plus * -std::expm1(-c_plus * delta / (2.0 * eps));
    const double down = 2.0 * eps / -c_minus * -std::expm1(c_minus * delta / (2.0 * eps));
    return 1.0 / (1.0 + up / down);
}

double laplace_hitting_time(double z0, double b_plus, double eps, double alpha) {
    if (!(z0 > 0.0)) throw std::invalid_argument("laplace_hitting_time needs z0 > 0");
    if (!(eps > 0.0)) throw std::invalid_argument("laplace_hitting_time needs eps > 0");
    if (!(alpha >= 0.0)) throw std::invalid_argument("laplace_hitting_time needs alpha >= 0");
    const double root = std::sqrt(b_plus * b_plus / (4.0 * eps) + 2.0 * alpha);
    return std::exp(-b_plus * z0 / (4.0 * eps) - z0 / (2.0 * std::sqrt(eps)) * root);
}

double pde_limit_u(const std::function<double(double)>& u0, double t, double z, double b_minus, double b_plus) {
    const auto cls = classify_two_particle(b_minus, b_plus).cls;
    if (cls == TwoParticleClass::DivDiv) {
        if (z > 0.0) return u0(z + b_plus * t);
        if (z < 0.0) return u0(z + b_minus * t);
        return (b_plus * u0(b_plus * t) - b_minus * u0(b_minus * t)) / (b_plus - b_minus);
    }
    if (cls == TwoParticleClass::ConvConv || cls == TwoParticleClass::DegenerateZero) {
        if (z > -b_plus * t) return u0(z + b_plus * t);
        if (z < -b_minus * t) return u0(z + b_minus * t);
        return u0(0.0);
    }
    throw std::invalid_argument("no limit formula for the mixed converging/diverging classes");
}

}  // namespace oflab
