#ifndef MSMSIM_COPULAS_HPP
#define MSMSIM_COPULAS_HPP

// Bivariate copula kernel: cdf, density, h-function (conditional cdf given
// the second argument) and its inverse in the first argument, for the
// Gaussian, Student-t, Clayton and Frank families plus independence.

#include <cmath>
#include <string>

#include "errors.hpp"
#include "special.hpp"

namespace msmsim {

enum class CopulaFamily { independence, gaussian, student_t, clayton, frank };

struct CopulaSpec {
    CopulaFamily family = CopulaFamily::independence;
    double par = 0.0; // rho for gaussian/student_t, theta for clayton/frank
    double df = 0.0;  // student_t only

    void validate() const {
        switch (family) {
        case CopulaFamily::independence:
            break;
        case CopulaFamily::gaussian:
            if (!(par > -1.0 && par < 1.0))
                throw config_error("gaussian copula needs -1 < rho < 1");
            break;
        case CopulaFamily::student_t:
            if (!(par > -1.0 && par < 1.0))
                throw config_error("t copula needs -1 < rho < 1");
            if (!(df > 0.0))
                throw config_error("t copula needs df > 0");
            break;
        case CopulaFamily::clayton:
            if (!(par > 0.0))
                throw config_error("clayton copula needs theta > 0");
            break;
        case CopulaFamily::frank:
            if (par == 0.0)
                throw config_error("frank copula needs theta != 0");
            break;
        }
    }

    std::string describe() const {
        switch (family) {
        case CopulaFamily::independence: return "independence";
        case CopulaFamily::gaussian: return "gaussian(" + std::to_string(par) + ")";
        case CopulaFamily::student_t:
            return "t(" + std::to_string(par) + ", " + std::to_string(df) + ")";
        case CopulaFamily::clayton: return "clayton(" + std::to_string(par) + ")";
        case CopulaFamily::frank: return "frank(" + std::to_string(par) + ")";
        }
        return "?";
    }
};

namespace detail {

inline void require_unit_closed(double u, double v, const char* who) {
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
        throw domain_error(std::string(who) + ": arguments must lie in [0,1]");
}

inline void require_unit_open(double u, double v, const char* who) {
    if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0))
        throw domain_error(std::string(who) + ": arguments must lie in (0,1)");
}

inline double h_raw(const CopulaSpec& c, double u, double v);

} // namespace detail

inline double copula_cdf(const CopulaSpec& c, double u, double v) {
    detail::require_unit_closed(u, v, "copula_cdf");
    if (u == 0.0 || v == 0.0) return 0.0;
    if (u == 1.0) return v;
    if (v == 1.0) return u;
    switch (c.family) {
    case CopulaFamily::independence:
        return u * v;
    case CopulaFamily::gaussian:
        return special::bvn_cdf(special::norm_quantile(u), special::norm_quantile(v),
                                c.par);
    case CopulaFamily::student_t:
        return special::bvt_cdf(special::t_quantile(u, c.df),
                                special::t_quantile(v, c.df), c.par, c.df);
    case CopulaFamily::clayton: {
        double s = std::pow(u, -c.par) + std::pow(v, -c.par) - 1.0;
        return std::pow(s, -1.0 / c.par);
    }
    case CopulaFamily::frank: {
        double d = std::expm1(-c.par);
        double a = std::expm1(-c.par * u);
        double b = std::expm1(-c.par * v);
        return -std::log1p(a * b / d) / c.par;
    }
    }
    return 0.0;
}

inline double copula_density(const CopulaSpec& c, double u, double v) {
    detail::require_unit_open(u, v, "copula_density");
    switch (c.family) {
    case CopulaFamily::independence:
        return 1.0;
    case CopulaFamily::gaussian: {
        double x = special::norm_quantile(u), y = special::norm_quantile(v);
        double r = c.par, o = 1.0 - r * r;
        return std::exp(-(r * r * (x * x + y * y) - 2.0 * r * x * y) / (2.0 * o)) /
               std::sqrt(o);
    }
    case CopulaFamily::student_t: {
        double x = special::t_quantile(u, c.df), y = special::t_quantile(v, c.df);
        double r = c.par, o = 1.0 - r * r, nu = c.df;
        double lognum = std::lgamma(0.5 * (nu + 2.0)) + std::lgamma(0.5 * nu) -
                        2.0 * std::lgamma(0.5 * (nu + 1.0));
        double q = 1.0 + (x * x - 2.0 * r * x * y + y * y) / (nu * o);
        double logden = -0.5 * std::log(o) - 0.5 * (nu + 2.0) * std::log(q) +
                        0.5 * (nu + 1.0) *
                            (std::log1p(x * x / nu) + std::log1p(y * y / nu));
        return std::exp(lognum + logden);
    }
    case CopulaFamily::clayton: {
        double th = c.par;
        double s = std::pow(u, -th) + std::pow(v, -th) - 1.0;
        return (1.0 + th) * std::pow(u * v, -th - 1.0) * std::pow(s, -1.0 / th - 2.0);
    }
    case CopulaFamily::frank: {
        double th = c.par;
        double d = std::expm1(-th);
        double a = std::expm1(-th * u);
        double b = std::expm1(-th * v);
        double den = d + a * b;
        return -th * d * std::exp(-th * (u + v)) / (den * den);
    }
    }
    return 1.0;
}

// h(u, v) = C(u | v) = dC(u,v)/dv; the second argument is the conditioning
// variable.
inline double h(const CopulaSpec& c, double u, double v) {
    detail::require_unit_open(u, v, "h");
    double out = detail::h_raw(c, u, v);
    return std::min(1.0, std::max(0.0, out));
}

namespace detail {

inline double h_raw(const CopulaSpec& c, double u, double v) {
    switch (c.family) {
    case CopulaFamily::independence:
        return u;
    case CopulaFamily::gaussian: {
        double x = special::norm_quantile(u), y = special::norm_quantile(v);
        return special::norm_cdf((x - c.par * y) / std::sqrt(1.0 - c.par * c.par));
    }
    case CopulaFamily::student_t: {
        double nu = c.df;
        double x = special::t_quantile(u, nu), y = special::t_quantile(v, nu);
        double s = std::sqrt((nu + y * y) * (1.0 - c.par * c.par) / (nu + 1.0));
        return special::t_cdf((x - c.par * y) / s, nu + 1.0);
    }
    case CopulaFamily::clayton: {
        double th = c.par;
        double s = std::pow(u, -th) + std::pow(v, -th) - 1.0;
        return std::pow(v, -th - 1.0) * std::pow(s, -(1.0 + th) / th);
    }
    case CopulaFamily::frank: {
        double th = c.par;
        double d = std::expm1(-th);
        double a = std::expm1(-th * u);
        double b = std::expm1(-th * v);
        return std::exp(-th * v) * a / (d + a * b);
    }
    }
    return u;
}

} // namespace detail

// Inverse of h in its first argument: h(h_inv(t, v), v) = t.
inline double h_inv(const CopulaSpec& c, double t, double v) {
    detail::require_unit_open(t, v, "h_inv");
    switch (c.family) {
    case CopulaFamily::independence:
        return t;
    case CopulaFamily::gaussian: {
        double z = special::norm_quantile(t), y = special::norm_quantile(v);
        double u = special::norm_cdf(z * std::sqrt(1.0 - c.par * c.par) + c.par * y);
        return std::min(1.0, std::max(0.0, u));
    }
    case CopulaFamily::student_t: {
        double nu = c.df;
        double z = special::t_quantile(t, nu + 1.0);
        double y = special::t_quantile(v, nu);
        double s = std::sqrt((nu + y * y) * (1.0 - c.par * c.par) / (nu + 1.0));
        double u = special::t_cdf(z * s + c.par * y, nu);
        return std::min(1.0, std::max(0.0, u));
    }
    case CopulaFamily::clayton: {
        // s - v^{-th} cancels badly for small v; factor s = v^{-th} t^{a} and
        // use expm1 on the t-part instead.
        double th = c.par;
        double a = -th / (th + 1.0);
        double g = std::expm1(a * std::log1p(t - 1.0));
        double u = std::pow(std::pow(v, -th) * g + 1.0, -1.0 / th);
        return std::min(1.0, std::max(0.0, u));
    }
    case CopulaFamily::frank: {
        // No numerically safe closed form at large |theta|: bisect on h.
        double lo = 0.0, hi = 1.0;
        for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
            double mid = 0.5 * (lo + hi);
            if (h(c, mid, v) < t)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }
    }
    return t;
}

} // namespace msmsim

#endif
