#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "perc/ball.hpp"
#include "perc/errors.hpp"
#include "perc/graph_model.hpp"
#include "perc/net.hpp"
#include "perc/radius_law.hpp"

namespace perc {

// Dimension data feeding every analytic bound. c2, c3 and the recursion
// constant k are fixed functions of (dim, c1).
struct Constants {
    double dim = 1;
    double c1 = 3;
    bool fitted = false; // true when any field came from sampled data rather than a declaration

    double c2() const { return c1 * std::pow(10.0, dim); }
    double c3() const { return c1 * std::pow(100.0, dim); }
    double k() const { return c1 * c1 * std::pow(800.0, dim); }
};

// Pick (dim, c1) for a model: explicit overrides win, then the model's
// declared values, then a fit from sampled covering data (flagged heuristic).
inline Constants resolve_constants(const GraphModel& model, std::optional<double> dim_override,
                                   std::optional<double> c1_override,
                                   std::string* warning = nullptr,
                                   std::int64_t budget = default_vertex_budget) {
    Constants c;
    bool fitted_dim = false;
    bool fitted_c1 = false;

    if (dim_override) {
        c.dim = *dim_override;
    } else if (model.declared_dim) {
        c.dim = *model.declared_dim;
    } else {
        auto rows = covering_profile(model, {4, 8, 16}, {Ratio{1, 2}, Ratio{1, 4}}, 3, 1, budget);
        c.dim = assouad_fit(rows).beta_hat;
        fitted_dim = true;
    }
    if (!(c.dim >= 0)) throw config_error("dimension must be >= 0");

    if (c1_override) {
        c.c1 = *c1_override;
    } else if (model.declared_c1) {
        c.c1 = *model.declared_c1;
    } else {
        double best = 1.0;
        for (std::int64_t r : {1, 2, 4, 8, 16})
            best = std::max(best, static_cast<double>(growth(model, model.origin(), r, budget)) /
                                      std::pow(static_cast<double>(r), c.dim));
        c.c1 = best;
        fitted_c1 = true;
    }
    if (!(c.c1 > 0)) throw config_error("growth constant c1 must be > 0");

    c.fitted = fitted_dim || fitted_c1;
    if (c.fitted && warning)
        *warning = "dimension constants fitted from sampled covering data; derived bounds are heuristic";
    return c;
}

// Upper bound p * c2 * r^dim on the escape probability P(G(v,r)).
inline double bound_G(const Constants& c, double p, std::int64_t r) {
    if (r < 1) throw config_error("bound scale r must be >= 1");
    return p * c.c2() * std::pow(static_cast<double>(r), c.dim);
}

// Upper bound p * c3 * E[R^dim ; R >= r] on the interference probability
// P(Htilde(v,r)). Infinite when the moment diverges.
inline double bound_Htilde(const Constants& c, double p, const RadiusLaw& law, std::int64_t r) {
    if (r < 1) throw config_error("bound scale r must be >= 1");
    return p * c.c3() * law.truncated_moment(c.dim, r);
}

// The explicit subcriticality threshold
//   min( 1 / (2 k c2 10^dim),  1 / (4 k c3 E[R^dim]) ).
// Deliberately conservative; requires the dim-th moment to be finite.
inline double p_zero(const Constants& c, const RadiusLaw& law) {
    if (!law.moment_finite(c.dim))
        throw infinite_moment_error("p_zero needs E[R^dim] < infinity, which this law violates");
    double m = law.truncated_moment(c.dim, 0);
    double a = 1.0 / (2.0 * c.k() * c.c2() * std::pow(10.0, c.dim));
    double b = 1.0 / (4.0 * c.k() * c.c3() * m);
    return std::min(a, b);
}

using Rational = boost::multiprecision::cpp_rational;

// Exact-arithmetic p_zero for integer dim and c1 with a point-mass radius law,
// where E[R^dim] = c^dim is an exact integer.
inline Rational p_zero_rational(std::int64_t dim, std::int64_t c1, const RadiusLaw& law) {
    if (dim < 0) throw config_error("dimension must be >= 0");
    if (c1 < 1) throw config_error("growth constant c1 must be >= 1");
    if (law.kind() != RadiusLaw::Kind::constant)
        throw config_error("exact p_zero supports point-mass radius laws only");
    using Int = boost::multiprecision::cpp_int;
    auto ipow = [](Int base, std::int64_t e) {
        Int out = 1;
        for (std::int64_t i = 0; i < e; ++i) out *= base;
        return out;
    };
    Int k = Int(c1) * c1 * ipow(800, dim);
    Int c2 = Int(c1) * ipow(10, dim);
    Int c3 = Int(c1) * ipow(100, dim);
    Int moment = ipow(law.constant_value(), dim); // 0^0 = 1 matches the moment convention
    if (moment == 0) return Rational(1, 2 * k * c2 * ipow(10, dim));
    Rational a(1, 2 * k * c2 * ipow(10, dim));
    Rational b(1, 4 * k * c3 * moment);
    return std::min(a, b);
}

// Two-sided enclosure of the far-interference probability P(H(v,r)).
// lo is the exact in-window value; hi adds a certified upper bound on the
// contribution of every sphere beyond the window.
struct HBracket {
    double lo = 0;
    double hi = 0;
};

namespace detail {

// Upper bound on sum_{j >= a} j^(-sigma), sigma > 1, by integral comparison.
inline double power_tail_upper(double sigma, double a) {
    return std::pow(a, -sigma) + std::pow(a, 1.0 - sigma) / (sigma - 1.0);
}

// Certified upper bound on S(J) = sum_{j >= J} j^dim P(R >= j).
inline double weighted_tail_sum_upper(const RadiusLaw& law, double dim, std::int64_t J) {
    if (J < 1) J = 1;
    switch (law.kind()) {
        case RadiusLaw::Kind::constant: {
            double sum = 0;
            for (std::int64_t j = J; j <= law.constant_value(); ++j)
                sum += std::pow(static_cast<double>(j), dim);
            return sum;
        }
        case RadiusLaw::Kind::geometric: {
            double q = law.geometric_q();
            double rho = (1.0 + q) / 2.0;
            double jstar = dim / std::log((1.0 + q) / (2.0 * q)) + 1.0;
            double sum = 0;
            for (std::int64_t j = J;; ++j) {
                double term = std::pow(static_cast<double>(j), dim) * law.tail(j);
                sum += term;
                if (static_cast<double>(j) >= jstar && term < 1e-15 * (sum + 1e-300)) {
                    sum += term * rho / (1.0 - rho);
                    return sum;
                }
            }
        }
        case RadiusLaw::Kind::zeta: {
            double alpha = law.zeta_alpha();
            if (alpha <= dim + 1.0) return std::numeric_limits<double>::infinity();
            std::int64_t head_end = J + 4000;
            double sum = 0;
            for (std::int64_t j = J; j < head_end; ++j)
                sum += std::pow(static_cast<double>(j), dim) * law.tail(j) * (1.0 + 1e-10);
            // P(R >= j) <= (j^-alpha / alpha + j^-(alpha+1)) / Z by integral comparison
            double z = zeta_tail(alpha + 1.0, 1);
            double a = static_cast<double>(head_end);
            sum += (power_tail_upper(alpha - dim, a) / alpha + power_tail_upper(alpha - dim + 1.0, a)) / z;
            return sum;
        }
    }
    return 0;
}

} // namespace detail

inline HBracket prob_H_bracket(const GraphModel& model, const Vertex& v, std::int64_t r, double p,
                               const RadiusLaw& law, std::int64_t L, const Constants& c,
                               std::int64_t budget = default_vertex_budget) {
    if (r < 1) throw config_error("event scale r must be >= 1");
    if (L <= 10 * r) throw window_error("bracket window must have radius > 10r");
    if (p == 0) return {0.0, 0.0};

    // exact sphere sizes where the model has them in closed form, else one
    // in-window ball; beyond the window the growth bound c1 k^dim steps in
    std::shared_ptr<const BallView> win;
    if (!model.transitive() || !model.sphere_size(1))
        win = ball(model, v, L, budget);
    auto sphere = [&](std::int64_t k) -> double {
        if (win) return static_cast<double>(win->sphere_count(k));
        if (auto s = model.sphere_size(k)) return static_cast<double>(*s);
        return c.c1 * std::pow(static_cast<double>(k), c.dim);
    };
    auto sphere_beyond = [&](std::int64_t k) -> double {
        if (!win)
            if (auto s = model.sphere_size(k)) return static_cast<double>(*s);
        return c.c1 * std::pow(static_cast<double>(k), c.dim);
    };
    // P(R > k/10) for integer k, exact: R > k/10 iff R >= floor(k/10) + 1
    auto far_tail = [&](std::int64_t k) { return law.tail(k / 10, true); };

    HBracket out;
    double log_keep = 0;
    for (std::int64_t k = 10 * r + 1; k <= L; ++k) {
        double x = p * far_tail(k);
        if (x <= 0) continue;
        if (x >= 1) {
            log_keep = -std::numeric_limits<double>::infinity();
            break;
        }
        log_keep += sphere(k) * std::log1p(-x);
    }
    out.lo = -std::expm1(log_keep);

    double tail_sum = 0;
    std::int64_t k_stop = L; // explicit terms cover (L, k_stop]; a grouped bound covers the rest
    switch (law.kind()) {
        case RadiusLaw::Kind::constant:
            k_stop = std::max(L, 10 * law.constant_value());
            break;
        case RadiusLaw::Kind::geometric:
            k_stop = L + 2000;
            break;
        case RadiusLaw::Kind::zeta:
            if (law.zeta_alpha() <= c.dim + 1.0) {
                out.hi = 1.0;
                return out;
            }
            k_stop = std::max(2 * L, std::int64_t{4000});
            break;
    }
    for (std::int64_t k = L + 1; k <= k_stop; ++k) tail_sum += sphere_beyond(k) * p * far_tail(k);
    // grouped closure: blocks of ten k share floor(k/10) = m, so
    //   sum_{k > k_stop} <= c1 10^(dim+1) sum_{j > floor(k_stop/10)} j^dim P(R >= j)
    double grouped = c.c1 * std::pow(10.0, c.dim + 1.0) *
                     detail::weighted_tail_sum_upper(law, c.dim, k_stop / 10 + 1);
    tail_sum += p * grouped;

    out.hi = std::min(1.0, out.lo + tail_sum);
    if (!(out.hi >= out.lo)) out.hi = out.lo; // NaN guard for degenerate inputs
    return out;
}

} // namespace perc
