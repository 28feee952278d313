#ifndef MSMSIM_SPECIAL_HPP
#define MSMSIM_SPECIAL_HPP

// Scalar special functions backing the distribution and copula kernels:
// normal cdf/quantile, regularized incomplete gamma and beta with inverses,
// Student-t cdf/quantile, and bivariate normal/t rectangle probabilities.

#include <cmath>
#include <limits>
#include <algorithm>
#include <functional>

#include "errors.hpp"

namespace msmsim::special {

inline constexpr double pi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------------------
// Univariate normal

inline double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi);
}

inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Acklam's rational approximation followed by one Halley step against the
// erfc-based cdf; round-trip error is at machine-precision level.
inline double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw domain_error("norm_quantile: p must lie in (0,1)");
    static const double a[6] = {
        -3.969683028665376e+01,  2.209460984245205e+02, -2.759285104469687e+02,
         1.383577518672690e+02, -3.066479806614716e+01,  2.506628277459239e+00};
    static const double b[5] = {
        -5.447609879822406e+01,  1.615858368580409e+02, -1.556989798598866e+02,
         6.680131188771972e+01, -1.328068155288572e+01};
    static const double c[6] = {
        -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
        -2.549732539343734e+00,  4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {
         7.784695709041462e-03,  3.224671290700398e-01,  2.445134137142996e+00,
         3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0]*q+c[1])*q+c[2])*q+c[3])*q+c[4])*q+c[5]) /
            ((((d[0]*q+d[1])*q+d[2])*q+d[3])*q+1.0);
    } else if (p <= phigh) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0]*r+a[1])*r+a[2])*r+a[3])*r+a[4])*r+a[5])*q /
            (((((b[0]*r+b[1])*r+b[2])*r+b[3])*r+b[4])*r+1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0]*q+c[1])*q+c[2])*q+c[3])*q+c[4])*q+c[5]) /
             ((((d[0]*q+d[1])*q+d[2])*q+d[3])*q+1.0);
    }
    double e = norm_cdf(x) - p;
    double u = e * std::sqrt(2.0 * pi) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

// ---------------------------------------------------------------------------
// Regularized incomplete gamma P(a,x), Q(a,x) and inverse (series, continued
// fraction, and 18-point quadrature for large shape).

namespace detail {

inline constexpr int gauleg_n = 18;
inline constexpr double gauleg_y[gauleg_n] = {
    0.0021695375159141994, 0.011413521097787704, 0.027972308950302116,
    0.051727015600492421,  0.082502225484340941, 0.12007019910960293,
    0.16415283300752470,   0.21442376986779355,  0.27051082840644336,
    0.33199876341447887,   0.39843234186401943,  0.46931971407375483,
    0.54413605556657973,   0.62232745288031077,  0.70331500465597174,
    0.78649910768313447,   0.87126389619061517,  0.95698180152629142};
inline constexpr double gauleg_w[gauleg_n] = {
    0.0055657196642445571, 0.012915947284065419, 0.020181515297735382,
    0.027298621498568734,  0.034213810770299537, 0.040875750923643261,
    0.047235083490265582,  0.053244713977759692, 0.058860144245324798,
    0.064039797355015485,  0.068745323835736408, 0.072941885005653087,
    0.076598410645870640,  0.079687828912071670, 0.082187266704339706,
    0.084078218979661945,  0.085346685739338721, 0.085983275670394821};

inline double gamma_ser(double a, double x) {
    const double eps = std::numeric_limits<double>::epsilon();
    double gln = std::lgamma(a);
    double ap = a, del = 1.0 / a, sum = del;
    for (int n = 0; n < 100000; ++n) {
        ++ap;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * eps)
            break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
}

inline double gamma_cf(double a, double x) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double fpmin = std::numeric_limits<double>::min() / eps;
    double gln = std::lgamma(a);
    double b = x + 1.0 - a, c = 1.0 / fpmin, d = 1.0 / b, h = d;
    for (int i = 1; i < 100000; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= eps)
            break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

inline double gammp_approx(double a, double x, bool psig) {
    double a1 = a - 1.0, lna1 = std::log(a1), sqrta1 = std::sqrt(a1);
    double gln = std::lgamma(a);
    double xu;
    if (x > a1)
        xu = std::max(a1 + 11.5 * sqrta1, x + 6.0 * sqrta1);
    else
        xu = std::max(0.0, std::min(a1 - 7.5 * sqrta1, x - 5.0 * sqrta1));
    double sum = 0.0;
    for (int j = 0; j < gauleg_n; ++j) {
        double t = x + (xu - x) * gauleg_y[j];
        sum += gauleg_w[j] * std::exp(-(t - a1) + a1 * (std::log(t) - lna1));
    }
    double ans = sum * (xu - x) * std::exp(a1 * (lna1 - 1.0) - gln);
    if (psig)
        return ans > 0.0 ? 1.0 - ans : -ans;
    return ans >= 0.0 ? ans : 1.0 + ans;
}

} // namespace detail

inline double gammap(double a, double x) {
    if (x < 0.0 || a <= 0.0)
        throw domain_error("gammap: need x >= 0 and a > 0");
    if (x == 0.0) return 0.0;
    if (a >= 100.0) return detail::gammp_approx(a, x, true);
    if (x < a + 1.0) return detail::gamma_ser(a, x);
    return 1.0 - detail::gamma_cf(a, x);
}

inline double gammaq(double a, double x) {
    if (x < 0.0 || a <= 0.0)
        throw domain_error("gammaq: need x >= 0 and a > 0");
    if (x == 0.0) return 1.0;
    if (a >= 100.0) return detail::gammp_approx(a, x, false);
    if (x < a + 1.0) return 1.0 - detail::gamma_ser(a, x);
    return detail::gamma_cf(a, x);
}

// ---------------------------------------------------------------------------
// Regularized incomplete beta I_x(a,b) and inverse.

namespace detail {

inline double beta_cf(double a, double b, double x) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double fpmin = std::numeric_limits<double>::min() / eps;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < 10000; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= eps)
            break;
    }
    return h;
}

inline double beta_approx(double a, double b, double x) {
    double a1 = a - 1.0, b1 = b - 1.0, mu = a / (a + b);
    double lnmu = std::log(mu), lnmuc = std::log(1.0 - mu);
    double t = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1.0)));
    double xu;
    if (x > mu) {
        if (x >= 1.0) return 1.0;
        xu = std::min(1.0, std::max(mu + 10.0 * t, x + 5.0 * t));
    } else {
        if (x <= 0.0) return 0.0;
        xu = std::max(0.0, std::min(mu - 10.0 * t, x - 5.0 * t));
    }
    double sum = 0.0;
    for (int j = 0; j < gauleg_n; ++j) {
        double tj = x + (xu - x) * gauleg_y[j];
        sum += gauleg_w[j] *
               std::exp(a1 * (std::log(tj) - lnmu) + b1 * (std::log(1.0 - tj) - lnmuc));
    }
    double ans = sum * (xu - x) *
                 std::exp(a1 * lnmu - std::lgamma(a) + b1 * lnmuc - std::lgamma(b) +
                          std::lgamma(a + b));
    return ans > 0.0 ? 1.0 - ans : -ans;
}

} // namespace detail

inline double inc_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0)
        throw domain_error("inc_beta: need a, b > 0");
    if (x < 0.0 || x > 1.0)
        throw domain_error("inc_beta: need x in [0,1]");
    if (x == 0.0 || x == 1.0) return x;
    if (a > 3000.0 && b > 3000.0) return detail::beta_approx(a, b, x);
    double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0))
        return bt * detail::beta_cf(a, b, x) / a;
    return 1.0 - bt * detail::beta_cf(b, a, 1.0 - x) / b;
}

inline double inc_beta_inv(double a, double b, double p) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double a1 = a - 1.0, b1 = b - 1.0, x;
    if (a >= 1.0 && b >= 1.0) {
        double pp = p < 0.5 ? p : 1.0 - p;
        double t = std::sqrt(-2.0 * std::log(pp));
        double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
        if (p < 0.5) z = -z;
        double al = (z * z - 3.0) / 6.0;
        double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
        double w = z * std::sqrt(al + h) / h -
                   (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) *
                       (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
        x = a / (a + b * std::exp(2.0 * w));
    } else {
        double lna = std::log(a / (a + b)), lnb = std::log(b / (a + b));
        double t = std::exp(a * lna) / a;
        double u = std::exp(b * lnb) / b;
        double w = t + u;
        if (p < t / w)
            x = std::pow(a * w * p, 1.0 / a);
        else
            x = 1.0 - std::pow(b * w * (1.0 - p), 1.0 / b);
    }
    double afac = -std::lgamma(a) - std::lgamma(b) + std::lgamma(a + b);
    for (int j = 0; j < 20; ++j) {
        if (x == 0.0 || x == 1.0) return x;
        double err = inc_beta(a, b, x) - p;
        double t = std::exp(a1 * std::log(x) + b1 * std::log(1.0 - x) + afac);
        double u = err / t;
        t = u / (1.0 - 0.5 * std::min(1.0, u * (a1 / x - b1 / (1.0 - x))));
        x -= t;
        if (x <= 0.0) x = 0.5 * (x + t);
        if (x >= 1.0) x = 0.5 * (x + t + 1.0);
        if (std::fabs(t) < 4e-16 * x && j > 0) break;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Student t

inline double t_pdf(double x, double nu) {
    double lognorm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                     0.5 * std::log(nu * pi);
    return std::exp(lognorm - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

inline double t_cdf(double x, double nu) {
    if (nu <= 0.0)
        throw domain_error("t_cdf: need nu > 0");
    if (x == 0.0) return 0.5;
    double ib = inc_beta(0.5 * nu, 0.5, nu / (nu + x * x));
    return x > 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

inline double t_quantile(double p, double nu) {
    if (!(p > 0.0 && p < 1.0))
        throw domain_error("t_quantile: p must lie in (0,1)");
    if (nu <= 0.0)
        throw domain_error("t_quantile: need nu > 0");
    if (p == 0.5) return 0.0;
    double pp = 2.0 * std::min(p, 1.0 - p);
    double w = inc_beta_inv(0.5 * nu, 0.5, pp);
    double x = std::sqrt(nu * (1.0 - w) / w);
    return p < 0.5 ? -x : x;
}

// ---------------------------------------------------------------------------
// Bivariate normal rectangle probability, Genz's adaptation of
// Drezner-Wesolowsky.  bvn_upper(h, k, r) = P(X > h, Y > k).

namespace detail {

inline constexpr double gl_x6[3] = {
    -0.9324695142031522, -0.6612093864662647, -0.2386191860831970};
inline constexpr double gl_w6[3] = {
    0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
inline constexpr double gl_x12[6] = {
    -0.9815606342467191, -0.9041172563704750, -0.7699026741943050,
    -0.5873179542866171, -0.3678314989981802, -0.1252334085114692};
inline constexpr double gl_w12[6] = {
    0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
    0.2031674267230659,  0.2334925365383547, 0.2491470458134029};
inline constexpr double gl_x20[10] = {
    -0.9931285991850949,  -0.9639719272779138, -0.9122344282513259,
    -0.8391169718222188,  -0.7463319064601508, -0.6360536807265150,
    -0.5108670019508271,  -0.3737060887154196, -0.2277858511416451,
    -0.07652652113349733};
inline constexpr double gl_w20[10] = {
    0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
    0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
    0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
    0.1527533871307259};

inline double bvn_upper(double dh, double dk, double r) {
    const double* gx;
    const double* gw;
    int ng;
    double ar = std::fabs(r);
    if (ar < 0.3)       { gx = gl_x6;  gw = gl_w6;  ng = 3; }
    else if (ar < 0.75) { gx = gl_x12; gw = gl_w12; ng = 6; }
    else                { gx = gl_x20; gw = gl_w20; ng = 10; }

    double h = dh, k = dk, hk = h * k, bvn = 0.0;
    if (ar < 0.925) {
        if (ar > 0.0) {
            double hs = 0.5 * (h * h + k * k);
            double asr = std::asin(r);
            for (int i = 0; i < ng; ++i) {
                for (int is = -1; is <= 1; is += 2) {
                    double sn = std::sin(asr * (is * gx[i] + 1.0) * 0.5);
                    bvn += gw[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
                }
            }
            bvn = bvn * asr / (4.0 * pi);
        }
        bvn += norm_cdf(-h) * norm_cdf(-k);
    } else {
        if (r < 0.0) { k = -k; hk = -hk; }
        if (ar < 1.0) {
            double as = (1.0 - r) * (1.0 + r);
            double a = std::sqrt(as);
            double bs = (h - k) * (h - k);
            double c = (4.0 - hk) / 8.0;
            double d = (12.0 - hk) / 16.0;
            double asr = -0.5 * (bs / as + hk);
            if (asr > -100.0)
                bvn = a * std::exp(asr) *
                      (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 +
                       c * d * as * as / 5.0);
            if (-hk < 100.0) {
                double bb = std::sqrt(bs);
                double sp = std::sqrt(2.0 * pi) * norm_cdf(-bb / a);
                bvn -= std::exp(-0.5 * hk) * sp * bb *
                       (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
            }
            a *= 0.5;
            for (int i = 0; i < ng; ++i) {
                for (int is = -1; is <= 1; is += 2) {
                    double xs = a * (is * gx[i] + 1.0);
                    xs = xs * xs;
                    double rs = std::sqrt(1.0 - xs);
                    double asr2 = -0.5 * (bs / xs + hk);
                    if (asr2 > -100.0) {
                        double sp = 1.0 + c * xs * (1.0 + d * xs);
                        double ep = std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs;
                        bvn += a * gw[i] * std::exp(asr2) * (ep - sp);
                    }
                }
            }
            bvn = -bvn / (2.0 * pi);
        }
        if (r > 0.0) {
            bvn += norm_cdf(-std::max(h, k));
        } else {
            bvn = -bvn;
            if (k > h) bvn += norm_cdf(k) - norm_cdf(h);
        }
    }
    return std::min(1.0, std::max(0.0, bvn));
}

} // namespace detail

// P(X <= x, Y <= y) for standard bivariate normal with correlation rho.
inline double bvn_cdf(double x, double y, double rho) {
    if (!(rho > -1.0 && rho < 1.0)) {
        if (rho >= 1.0) return norm_cdf(std::min(x, y));
        return std::max(0.0, norm_cdf(x) - norm_cdf(-y));
    }
    return detail::bvn_upper(-x, -y, rho);
}

// ---------------------------------------------------------------------------
// Bivariate Student t rectangle probability P(X <= x, Y <= y), correlation
// rho, nu degrees of freedom.  Integer nu uses the Dunnett-Sobel series;
// fractional nu integrates the conditional cdf.

namespace detail {

inline double bvt_cdf_int(int nu, double dh, double dk, double r) {
    const double eps = 1e-15;
    if (1.0 - r <= eps) return t_cdf(std::min(dh, dk), nu);
    if (r + 1.0 <= eps)
        return dh > -dk ? t_cdf(dh, nu) - t_cdf(-dk, nu) : 0.0;

    double tpi = 2.0 * pi;
    double snu = std::sqrt(static_cast<double>(nu));
    double ors = 1.0 - r * r;
    double hrk = dh - r * dk;
    double krh = dk - r * dh;
    double xnhk = 0.0, xnkh = 0.0;
    if (std::fabs(hrk) + ors > 0.0) {
        xnhk = hrk * hrk / (hrk * hrk + ors * (nu + dk * dk));
        xnkh = krh * krh / (krh * krh + ors * (nu + dh * dh));
    }
    double hs = hrk >= 0.0 ? 1.0 : -1.0;
    double ks = krh >= 0.0 ? 1.0 : -1.0;
    double bvt;
    if (nu % 2 == 0) {
        bvt = std::atan2(std::sqrt(ors), -r) / tpi;
        double gmph = dh / std::sqrt(16.0 * (nu + dh * dh));
        double gmpk = dk / std::sqrt(16.0 * (nu + dk * dk));
        double btnckh = 2.0 * std::atan2(std::sqrt(xnkh), std::sqrt(1.0 - xnkh)) / pi;
        double btpdkh = 2.0 * std::sqrt(xnkh * (1.0 - xnkh)) / pi;
        double btnchk = 2.0 * std::atan2(std::sqrt(xnhk), std::sqrt(1.0 - xnhk)) / pi;
        double btpdhk = 2.0 * std::sqrt(xnhk * (1.0 - xnhk)) / pi;
        for (int j = 1; j <= nu / 2; ++j) {
            bvt += gmph * (1.0 + ks * btnckh);
            bvt += gmpk * (1.0 + hs * btnchk);
            btnckh += btpdkh;
            btpdkh = 2.0 * j * btpdkh * (1.0 - xnkh) / (2.0 * j + 1.0);
            btnchk += btpdhk;
            btpdhk = 2.0 * j * btpdhk * (1.0 - xnhk) / (2.0 * j + 1.0);
            gmph = gmph * (2.0 * j - 1.0) / (2.0 * j * (1.0 + dh * dh / nu));
            gmpk = gmpk * (2.0 * j - 1.0) / (2.0 * j * (1.0 + dk * dk / nu));
        }
    } else {
        double qhrk =
            std::sqrt(dh * dh + dk * dk - 2.0 * r * dh * dk + nu * ors);
        double hkrn = dh * dk + r * nu;
        double hkn = dh * dk - nu;
        double hpk = dh + dk;
        bvt = std::atan2(-snu * (hkn * qhrk + hpk * hkrn),
                         hkn * hkrn - nu * hpk * qhrk) / tpi;
        if (bvt < -eps) bvt += 1.0;
        double gmph = dh / (tpi * snu * (1.0 + dh * dh / nu));
        double gmpk = dk / (tpi * snu * (1.0 + dk * dk / nu));
        double btnckh = std::sqrt(xnkh);
        double btpdkh = btnckh;
        double btnchk = std::sqrt(xnhk);
        double btpdhk = btnchk;
        for (int j = 1; j <= (nu - 1) / 2; ++j) {
            bvt += gmph * (1.0 + ks * btnckh);
            bvt += gmpk * (1.0 + hs * btnchk);
            btpdkh = (2.0 * j - 1.0) * btpdkh * (1.0 - xnkh) / (2.0 * j);
            btnckh += btpdkh;
            btpdhk = (2.0 * j - 1.0) * btpdhk * (1.0 - xnhk) / (2.0 * j);
            btnchk += btpdhk;
            gmph = gmph * 2.0 * j / ((2.0 * j + 1.0) * (1.0 + dh * dh / nu));
            gmpk = gmpk * 2.0 * j / ((2.0 * j + 1.0) * (1.0 + dk * dk / nu));
        }
    }
    return std::min(1.0, std::max(0.0, bvt));
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f,
                                   double a, double b, double fa, double fm,
                                   double fb, double whole, double tol,
                                   int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

inline double integrate_adaptive(const std::function<double(double)>& f, double a,
                                 double b, double tol = 1e-11, int depth = 40) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

inline double bvt_cdf(double x, double y, double rho, double nu) {
    if (nu <= 0.0)
        throw domain_error("bvt_cdf: need nu > 0");
    double nearest = std::round(nu);
    if (std::fabs(nu - nearest) < 1e-12 && nearest >= 1.0)
        return detail::bvt_cdf_int(static_cast<int>(nearest), x, y, rho);
    // Integrate F(x | Y = T^{-1}(p)) over p in (0, T(y)); the conditional is a
    // rescaled t with nu+1 degrees of freedom.
    double v = t_cdf(y, nu);
    if (v <= 0.0) return 0.0;
    double scale = std::sqrt((nu + 1.0) / (1.0 - rho * rho));
    auto f = [&](double p) {
        if (p <= 0.0 || p >= 1.0) {
            double lim = -rho * (p <= 0.0 ? -1.0 : 1.0) * scale;
            return t_cdf(lim, nu + 1.0);
        }
        double s = t_quantile(p, nu);
        double arg = (x - rho * s) * scale / std::sqrt(nu + s * s);
        return t_cdf(arg, nu + 1.0);
    };
    return std::min(1.0, std::max(0.0, integrate_adaptive(f, 0.0, v, 1e-12, 48)));
}

} // namespace msmsim::special

#endif
