#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "perc/errors.hpp"

namespace perc {

// Sum of t^(-sigma) over integers t >= a, for sigma > 1. Explicit head plus
// an Euler-Maclaurin closure at T:
//   sum_{j>=T} j^-s = T^(1-s)/(s-1) + T^-s/2 + s T^-(s+1)/12 - s(s+1)(s+2) T^-(s+3)/720 + ...
// T is pushed far enough out that the dropped term is below 1e-13 relative.
inline double zeta_tail(double sigma, std::int64_t a) {
    if (sigma <= 1.0) return std::numeric_limits<double>::infinity();
    if (a < 1) a = 1;
    std::int64_t T = a;
    std::int64_t min_T = static_cast<std::int64_t>(64.0 * sigma) + 64;
    if (T < min_T) T = min_T;
    double head = 0;
    for (std::int64_t j = T - 1; j >= a; --j) // ascending magnitude, keeps the sum tight
        head += std::pow(static_cast<double>(j), -sigma);
    double x = static_cast<double>(T);
    double tail = std::pow(x, 1.0 - sigma) / (sigma - 1.0)
                + std::pow(x, -sigma) / 2.0
                + sigma * std::pow(x, -sigma - 1.0) / 12.0
                - sigma * (sigma + 1.0) * (sigma + 2.0) * std::pow(x, -sigma - 3.0) / 720.0;
    return head + tail;
}

// Distribution of the random radius R on {0, 1, 2, ...}. Three families:
//   const:c  -- point mass at c
//   geom:q   -- P(R >= k) = q^k, mean q/(1-q)
//   zeta:a   -- P(R = k) proportional to (k+1)^-(a+1); E[R^s] finite iff s < a
// Copies are cheap; the zeta tail table is shared.
class RadiusLaw {
  public:
    enum class Kind { constant, geometric, zeta };

    static RadiusLaw constant(std::int64_t c) {
        if (c < 0) throw config_error("constant radius must be >= 0");
        RadiusLaw law;
        law.kind_ = Kind::constant;
        law.c_ = c;
        return law;
    }

    static RadiusLaw geometric(double q) {
        if (!(q > 0.0 && q < 1.0)) throw config_error("geometric parameter must be in (0,1)");
        RadiusLaw law;
        law.kind_ = Kind::geometric;
        law.q_ = q;
        return law;
    }

    static RadiusLaw zeta(double alpha) {
        if (!(alpha > 0.0)) throw config_error("zeta exponent must be > 0");
        RadiusLaw law;
        law.kind_ = Kind::zeta;
        law.alpha_ = alpha;
        law.tab_ = std::make_shared<ZetaTable>(alpha);
        return law;
    }

    // "const:3", "geom:0.5", "zeta:1.5"
    static RadiusLaw parse(const std::string& spec) {
        auto colon = spec.find(':');
        if (colon == std::string::npos)
            throw parse_error("bad law spec '" + spec + "' (expected const:C, geom:Q, zeta:A)");
        std::string kind = spec.substr(0, colon);
        std::string arg = spec.substr(colon + 1);
        try {
            std::size_t used = 0;
            if (kind == "const") {
                std::int64_t c = std::stoll(arg, &used);
                if (used != arg.size()) throw std::invalid_argument(arg);
                return constant(c);
            }
            if (kind == "geom" || kind == "zeta") {
                double x = std::stod(arg, &used);
                if (used != arg.size()) throw std::invalid_argument(arg);
                return kind == "geom" ? geometric(x) : zeta(x);
            }
        } catch (const std::invalid_argument&) {
            throw parse_error("bad law argument in '" + spec + "'");
        } catch (const std::out_of_range&) {
            throw parse_error("law argument out of range in '" + spec + "'");
        }
        throw parse_error("unknown law '" + kind + "' (expected const, geom, zeta)");
    }

    Kind kind() const { return kind_; }

    std::string str() const {
        char buf[64];
        switch (kind_) {
            case Kind::constant: return "const:" + std::to_string(c_);
            case Kind::geometric: std::snprintf(buf, sizeof buf, "geom:%.17g", q_); return buf;
            case Kind::zeta: std::snprintf(buf, sizeof buf, "zeta:%.17g", alpha_); return buf;
        }
        return "?";
    }

    double pmf(std::int64_t k) const {
        if (k < 0) return 0;
        switch (kind_) {
            case Kind::constant: return k == c_ ? 1.0 : 0.0;
            case Kind::geometric: return (1.0 - q_) * std::pow(q_, static_cast<double>(k));
            case Kind::zeta: return std::pow(static_cast<double>(k + 1), -(alpha_ + 1.0)) / tab_->z;
        }
        return 0;
    }

    // P(R >= r), or P(R > r) with strict = true.
    double tail(std::int64_t r, bool strict = false) const {
        if (strict) return tail(r + 1, false);
        if (r <= 0) return 1.0;
        switch (kind_) {
            case Kind::constant: return c_ >= r ? 1.0 : 0.0;
            case Kind::geometric: return std::pow(q_, static_cast<double>(r));
            case Kind::zeta:
                if (r < static_cast<std::int64_t>(tab_->tail.size())) return tab_->tail[r];
                return zeta_tail(alpha_ + 1.0, r + 1) / tab_->z;
        }
        return 0;
    }

    // Smallest k with P(R <= k) > u, for u in [0,1). Monotone in u, so it
    // supports inverse-transform sampling and couples across seeds.
    std::int64_t quantile(double u) const {
        if (!(u >= 0.0 && u < 1.0)) throw config_error("quantile argument must be in [0,1)");
        double v = 1.0 - u; // want the smallest m >= 1 with P(R >= m) < v, then k = m-1
        switch (kind_) {
            case Kind::constant:
                return c_;
            case Kind::geometric: {
                std::int64_t m = 1;
                if (v < q_) {
                    m = static_cast<std::int64_t>(std::floor(std::log(v) / std::log(q_))) - 2;
                    if (m < 1) m = 1;
                }
                while (std::pow(q_, static_cast<double>(m)) >= v) ++m;
                return m - 1;
            }
            case Kind::zeta: {
                const std::vector<double>& t = tab_->tail;
                std::int64_t n = static_cast<std::int64_t>(t.size()) - 1;
                if (t[n] < v) {
                    // binary search the first m with tail[m] < v
                    std::int64_t lo = 1, hi = n;
                    while (lo < hi) {
                        std::int64_t mid = lo + (hi - lo) / 2;
                        if (t[mid] < v) hi = mid; else lo = mid + 1;
                    }
                    return lo - 1;
                }
                // beyond the table: exponential then binary search on the analytic tail
                auto tl = [&](std::int64_t m) { return zeta_tail(alpha_ + 1.0, m + 1) / tab_->z; };
                std::int64_t lo = n, hi = n * 2;
                while (tl(hi) >= v) {
                    lo = hi;
                    if (hi > (std::int64_t{1} << 60)) throw config_error("quantile argument too close to 1");
                    hi *= 2;
                }
                while (lo < hi) {
                    std::int64_t mid = lo + (hi - lo) / 2;
                    if (tl(mid) < v) hi = mid; else lo = mid + 1;
                }
                return lo - 1;
            }
        }
        return 0;
    }

    // True iff E[R^s] < infinity.
    bool moment_finite(double s) const {
        if (s < 0) throw config_error("moment order must be >= 0");
        return kind_ != Kind::zeta || s < alpha_;
    }

    // E[R^s ; R >= r], with 0^0 = 1. Returns +infinity when divergent.
    double truncated_moment(double s, std::int64_t r) const {
        if (s < 0) throw config_error("moment order must be >= 0");
        if (r < 0) r = 0;
        if (!moment_finite(s)) return std::numeric_limits<double>::infinity();
        auto kpow = [s](std::int64_t k) {
            if (k == 0) return s == 0.0 ? 1.0 : 0.0;
            return std::pow(static_cast<double>(k), s);
        };
        switch (kind_) {
            case Kind::constant:
                return c_ >= r ? kpow(c_) : 0.0;
            case Kind::geometric: {
                double sum = (r == 0) ? kpow(0) * (1.0 - q_) : 0.0;
                // beyond k*, the term ratio q(1+1/k)^s stays below rho < 1
                double rho = (1.0 + q_) / 2.0;
                double kstar = s / std::log((1.0 + q_) / (2.0 * q_)) + 1.0;
                double term = 0;
                for (std::int64_t k = std::max<std::int64_t>(r, 1);; ++k) {
                    term = kpow(k) * (1.0 - q_) * std::pow(q_, static_cast<double>(k));
                    sum += term;
                    if (static_cast<double>(k) >= kstar) {
                        double rem = term * rho / (1.0 - rho);
                        if (rem < 1e-15 * sum + 1e-300) break;
                    }
                }
                return sum;
            }
            case Kind::zeta: {
                double sum = (r == 0) ? kpow(0) / tab_->z : 0.0;
                std::int64_t T = std::max<std::int64_t>(
                    {r, static_cast<std::int64_t>(200.0 * (s + 4.0)),
                     static_cast<std::int64_t>(64.0 * (alpha_ + 4.0))});
                for (std::int64_t k = std::max<std::int64_t>(r, 1); k < T; ++k)
                    sum += kpow(k) * std::pow(static_cast<double>(k + 1), -(alpha_ + 1.0)) / tab_->z;
                // sum_{k>=T} k^s (k+1)^-(a+1) = sum_{t>T} (t-1)^s t^-(a+1),
                // expanded via (t-1)^s = t^s (1 - 1/t)^s into shifted zeta tails
                double coef = 1.0;
                for (int m = 0; m <= 4; ++m) {
                    if (m > 0) coef *= -(s - (m - 1)) / m;
                    if (coef == 0) break;
                    sum += coef * zeta_tail(alpha_ + 1.0 - s + m, T + 1) / tab_->z;
                }
                return sum;
            }
        }
        return 0;
    }

    double mean() const { return truncated_moment(1.0, 0); }

    // Family parameters, for exact-arithmetic callers and reporting.
    std::int64_t constant_value() const { return c_; }
    double geometric_q() const { return q_; }
    double zeta_alpha() const { return alpha_; }

  private:
    struct ZetaTable {
        explicit ZetaTable(double alpha) {
            z = zeta_tail(alpha + 1.0, 1);
            const std::int64_t n = 65536;
            tail.assign(n + 1, 0.0);
            tail[n] = zeta_tail(alpha + 1.0, n + 1) / z;
            for (std::int64_t j = n - 1; j >= 0; --j)
                tail[j] = tail[j + 1] + std::pow(static_cast<double>(j + 1), -(alpha + 1.0)) / z;
        }
        double z; // normalizer sum_k (k+1)^-(alpha+1)
        std::vector<double> tail; // tail[j] = P(R >= j)
    };

    RadiusLaw() = default;

    Kind kind_ = Kind::constant;
    std::int64_t c_ = 0;
    double q_ = 0.5;
    double alpha_ = 1.0;
    std::shared_ptr<const ZetaTable> tab_;
};

} // namespace perc
