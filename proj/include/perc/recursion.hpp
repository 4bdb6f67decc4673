#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "perc/errors.hpp"

namespace perc {

// Report of the quadratic recursion
//   direct[n] = direct[n-1]^2 + g[n-1],  direct[0] = max f0,
// against the closed-form majorant
//   closed[n] = 2^-(n+1) + sum_{j=0}^{n-1} 2^-j g[n-1-j].
// The iterate is evaluated in 140-bit fixed point rounded up and the majorant
// rounded down, so direct_below_closed certifies the exact inequality.
struct RecursionReport {
    std::vector<double> f0;
    std::vector<double> g;
    std::vector<double> direct; // upper iterate per level
    std::vector<double> closed; // lower majorant per level
    bool hypotheses_ok = false;       // max f0 <= 1/2 and every g <= 1/4
    bool direct_below_closed = false; // certified for every level
    bool direct_below_half = false;   // certified for every level
    double final_direct = 0;
};

inline RecursionReport recursion_check(const std::vector<double>& f0,
                                       const std::vector<double>& g) {
    using Int = boost::multiprecision::cpp_int;
    if (f0.empty()) throw config_error("recursion needs at least one base value");
    for (double x : f0)
        if (!(x >= 0.0) || !(x <= 1.0)) throw config_error("base values must lie in [0,1]");
    for (double x : g)
        if (!(x >= 0.0) || !(x <= 1.0)) throw config_error("level values must lie in [0,1]");

    constexpr int scale_bits = 140;
    const Int one = Int(1) << scale_bits;

    // doubles are dyadic rationals; frexp/ldexp recover the mantissa exactly,
    // so the only rounding is the final shift, taken in the requested direction
    auto to_fixed = [&](double x, bool round_up) -> Int {
        if (x <= 0.0) return 0;
        int e = 0;
        double m = std::frexp(x, &e);
        Int v = static_cast<std::int64_t>(std::ldexp(m, 53));
        int shift = e - 53 + scale_bits;
        if (shift >= 0) return v << shift;
        Int down = v >> -shift;
        if (round_up && (down << -shift) != v) ++down;
        return down;
    };

    RecursionReport rep;
    rep.f0 = f0;
    rep.g = g;

    double f0_max = 0, g_max = 0;
    for (double x : f0) f0_max = std::max(f0_max, x);
    for (double x : g) g_max = std::max(g_max, x);
    rep.hypotheses_ok = f0_max <= 0.5 && g_max <= 0.25;

    std::size_t levels = g.size();
    std::vector<Int> g_up(levels), g_dn(levels);
    for (std::size_t i = 0; i < levels; ++i) {
        g_up[i] = to_fixed(g[i], true);
        g_dn[i] = to_fixed(g[i], false);
    }

    std::vector<Int> direct_fp;
    direct_fp.reserve(levels + 1);
    direct_fp.push_back(to_fixed(f0_max, true));
    for (std::size_t n = 1; n <= levels; ++n) {
        Int sq = direct_fp.back() * direct_fp.back();
        Int up = (sq + one - 1) >> scale_bits;
        direct_fp.push_back(up + g_up[n - 1]);
    }

    std::vector<Int> closed_fp;
    closed_fp.reserve(levels + 1);
    for (std::size_t n = 0; n <= levels; ++n) {
        Int s = one >> (n + 1);
        for (std::size_t j = 0; j < n; ++j) s += g_dn[n - 1 - j] >> j;
        closed_fp.push_back(s);
    }

    rep.direct_below_closed = true;
    rep.direct_below_half = true;
    const Int half = one >> 1;
    auto to_double = [&](const Int& v) {
        return std::ldexp(v.convert_to<double>(), -scale_bits);
    };
    for (std::size_t n = 0; n <= levels; ++n) {
        if (direct_fp[n] > closed_fp[n]) rep.direct_below_closed = false;
        if (direct_fp[n] > half) rep.direct_below_half = false;
        rep.direct.push_back(to_double(direct_fp[n]));
        rep.closed.push_back(to_double(closed_fp[n]));
    }
    rep.final_direct = rep.direct.back();
    return rep;
}

} // namespace perc
