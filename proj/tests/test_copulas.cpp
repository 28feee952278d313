#include <catch2/catch_amalgamated.hpp>

#include <msmsim/copulas.hpp>

#include "oracles.hpp"

using namespace msmsim;

namespace {

CopulaSpec gauss(double rho) { return {CopulaFamily::gaussian, rho, 0.0}; }
CopulaSpec tcop(double rho, double df) { return {CopulaFamily::student_t, rho, df}; }
CopulaSpec clayton(double th) { return {CopulaFamily::clayton, th, 0.0}; }
CopulaSpec frank(double th) { return {CopulaFamily::frank, th, 0.0}; }
CopulaSpec indep() { return {}; }

std::vector<CopulaSpec> family_grid() {
    return {gauss(-0.8), gauss(-0.3), gauss(0.5),  gauss(0.9),
            tcop(-0.5, 5.0), tcop(0.6, 3.0), tcop(0.2, 7.5),
            clayton(0.7), clayton(2.0), clayton(6.0),
            frank(-8.0), frank(3.0), frank(12.0), indep()};
}

// Gaussian copula cdf by 2-D quadrature of the bivariate normal density over
// the rectangle (-inf, x] x (-inf, y] in latent space.
double gauss_cdf_quadrature(double u, double v, double rho) {
    double x = msmsim::special::norm_quantile(u);
    double y = msmsim::special::norm_quantile(v);
    auto dens = [rho](double s, double t) {
        double o = 1.0 - rho * rho;
        return std::exp(-(s * s - 2.0 * rho * s * t + t * t) / (2.0 * o)) /
               (2.0 * msmsim::special::pi * std::sqrt(o));
    };
    return oracle::simp2d(dens, -9.0, x, -9.0, y, 1200, 1200);
}

// Student-t copula cdf through the chi-square scale mixture of the (already
// quadrature-validated) bivariate normal rectangle probability.
double t_cdf_mixture(double u, double v, double rho, double nu) {
    double x = msmsim::special::t_quantile(u, nu);
    double y = msmsim::special::t_quantile(v, nu);
    auto f = [&](double w) {
        double chi2pdf = std::exp((0.5 * nu - 1.0) * std::log(w) - 0.5 * w -
                                  0.5 * nu * std::log(2.0) - std::lgamma(0.5 * nu));
        double s = std::sqrt(w / nu);
        return chi2pdf * msmsim::special::bvn_cdf(x * s, y * s, rho);
    };
    return oracle::quad1d(f, 1e-12, 60.0 + 20.0 * nu, 1e-13);
}

} // namespace

TEST_CASE("copula cdf boundary identities", "[copulas]") {
    for (const auto& c : family_grid()) {
        for (double u : {0.05, 0.3, 0.62, 0.97}) {
            CHECK(std::fabs(copula_cdf(c, u, 0.0)) < 1e-12);
            CHECK(std::fabs(copula_cdf(c, 0.0, u)) < 1e-12);
            CHECK(std::fabs(copula_cdf(c, u, 1.0) - u) < 1e-12);
            CHECK(std::fabs(copula_cdf(c, 1.0, u) - u) < 1e-12);
        }
    }
    CHECK(copula_cdf(indep(), 0.3, 0.7) == Catch::Approx(0.21));
    CHECK_THROWS_AS(copula_cdf(gauss(0.5), -0.1, 0.5), domain_error);
}

TEST_CASE("copula cdf is 2-increasing", "[copulas]") {
    for (const auto& c : family_grid()) {
        for (double u1 : {0.1, 0.4, 0.7}) {
            for (double v1 : {0.15, 0.5, 0.8}) {
                double u2 = u1 + 0.15, v2 = v1 + 0.15;
                double vol = copula_cdf(c, u2, v2) - copula_cdf(c, u1, v2) -
                             copula_cdf(c, u2, v1) + copula_cdf(c, u1, v1);
                CHECK(vol >= -1e-12);
            }
        }
    }
}

TEST_CASE("gaussian copula cdf matches 2-D quadrature", "[copulas]") {
    double ref = gauss_cdf_quadrature(0.3, 0.7, 0.5);
    CHECK(std::fabs(copula_cdf(gauss(0.5), 0.3, 0.7) - ref) < 1e-8);
    for (double rho : {-0.95, -0.4, 0.2, 0.8}) {
        for (double u : {0.1, 0.55}) {
            for (double v : {0.35, 0.9}) {
                double r = gauss_cdf_quadrature(u, v, rho);
                CHECK(std::fabs(copula_cdf(gauss(rho), u, v) - r) < 1e-7);
            }
        }
    }
}

TEST_CASE("student t copula cdf matches the scale-mixture quadrature",
          "[copulas]") {
    for (const auto& c : {tcop(-0.5, 5.0), tcop(0.6, 4.0), tcop(0.3, 6.5)}) {
        for (double u : {0.2, 0.6}) {
            for (double v : {0.3, 0.85}) {
                double ref = t_cdf_mixture(u, v, c.par, c.df);
                CHECK(std::fabs(copula_cdf(c, u, v) - ref) < 1e-8);
            }
        }
    }
}

TEST_CASE("h-function special values", "[copulas]") {
    CHECK(h(indep(), 0.37, 0.8) == Catch::Approx(0.37));
    for (double rho : {-0.9, -0.5, 0.0, 0.4, 0.95})
        CHECK(h(gauss(rho), 0.5, 0.5) == Catch::Approx(0.5).margin(1e-12));
    CHECK_THROWS_AS(h(gauss(0.5), 0.0, 0.5), domain_error);
    CHECK_THROWS_AS(h_inv(gauss(0.5), 1.0, 0.5), domain_error);
}

TEST_CASE("h equals the v-derivative of the cdf", "[copulas]") {
    // Finite difference of the scale-mixture quadrature cdf, step 1e-5.
    auto cdf_q = [](double u, double v) { return t_cdf_mixture(u, v, -0.5, 5.0); };
    double ref = oracle::fd_dv(cdf_q, 0.3, 0.7, 1e-5);
    CHECK(std::fabs(h(tcop(-0.5, 5.0), 0.3, 0.7) - ref) < 1e-6);

    // Self-consistency of every family's h against its own cdf.
    for (const auto& cc : family_grid()) {
        double refd = oracle::fd_dv(
            [&](double u, double v) { return copula_cdf(cc, u, v); }, 0.42, 0.63,
            1e-4);
        CHECK(std::fabs(h(cc, 0.42, 0.63) - refd) < 1e-6);
    }
}

TEST_CASE("h and h_inv round trip on a grid", "[copulas]") {
    // Intermediate values within ~1e-6 of the boundary no longer carry the
    // tail information a double needs for a 1e-9 round trip (the simulators
    // clamp at 1e-12 and tolerate that region); assert the strict bound on
    // the interior window and basic sanity outside it.
    for (const auto& c : family_grid()) {
        for (int i = 1; i <= 50; ++i) {
            for (int j = 1; j <= 50; ++j) {
                double u = i / 51.0, v = j / 51.0;
                double t = h(c, u, v);
                if (t > 1e-6 && t < 1.0 - 1e-6) {
                    CHECK(std::fabs(h_inv(c, t, v) - u) < 1e-9);
                } else if (t > 0.0 && t < 1.0) {
                    double back = h_inv(c, t, v);
                    CHECK(back >= 0.0);
                    CHECK(back <= 1.0);
                }
                double x = h_inv(c, u, v);
                if (x > 1e-6 && x < 1.0 - 1e-6) {
                    CHECK(std::fabs(h(c, x, v) - u) < 1e-9);
                }
            }
        }
    }
}

TEST_CASE("frank reference point round trips", "[copulas]") {
    double x = h_inv(frank(3.0), 0.25, 0.8);
    CHECK(std::fabs(h(frank(3.0), x, 0.8) - 0.25) < 1e-9);
}

TEST_CASE("h is strictly increasing in u", "[copulas]") {
    for (const auto& c : family_grid()) {
        for (double v : {0.1, 0.5, 0.9}) {
            double prev = -1.0;
            for (int i = 1; i <= 200; ++i) {
                double u = i / 201.0;
                double t = h(c, u, v);
                CHECK(t > prev);
                prev = t;
            }
        }
    }
}

TEST_CASE("copula density matches finite differences of the cdf", "[copulas]") {
    // Mixed second difference of C; integer-df t copulas only, where the cdf
    // is evaluated by the exact series.
    auto mixed_fd = [](const CopulaSpec& c, double u, double v) {
        double s = 1e-4;
        return (copula_cdf(c, u + s, v + s) - copula_cdf(c, u - s, v + s) -
                copula_cdf(c, u + s, v - s) + copula_cdf(c, u - s, v - s)) /
               (4.0 * s * s);
    };
    for (const auto& c :
         {gauss(-0.6), gauss(0.3), tcop(-0.5, 5.0), tcop(0.4, 4.0), clayton(1.5),
          frank(4.0), frank(-3.0)}) {
        for (double u : {0.25, 0.5, 0.75}) {
            for (double v : {0.3, 0.65}) {
                CHECK(std::fabs(copula_density(c, u, v) - mixed_fd(c, u, v)) < 1e-5);
            }
        }
    }
}

TEST_CASE("vanishing dependence approaches independence", "[copulas]") {
    // The t copula keeps its chi-square mixing dependence at rho = 0, so the
    // independence limit applies to the other three parametric families; the
    // t family is checked against its analytic rho = 0 conditional instead.
    for (double u : {0.2, 0.5, 0.8}) {
        for (double v : {0.3, 0.7}) {
            CHECK(std::fabs(copula_cdf(gauss(1e-8), u, v) - u * v) < 1e-6);
            CHECK(std::fabs(h(gauss(1e-8), u, v) - u) < 1e-6);
            CHECK(std::fabs(h(clayton(1e-7), u, v) - u) < 1e-6);
            CHECK(std::fabs(h(frank(1e-7), u, v) - u) < 1e-6);
            CHECK(std::fabs(h_inv(frank(1e-7), u, v) - u) < 1e-6);

            double nu = 5.0;
            double x = msmsim::special::t_quantile(u, nu);
            double y = msmsim::special::t_quantile(v, nu);
            double rho0 = msmsim::special::t_cdf(
                x * std::sqrt((nu + 1.0) / (nu + y * y)), nu + 1.0);
            CHECK(std::fabs(h(tcop(1e-8, nu), u, v) - rho0) < 1e-6);
        }
    }
}

TEST_CASE("bivariate normal helper against quadrature", "[copulas][special]") {
    using msmsim::special::bvn_cdf;
    using msmsim::special::norm_quantile;
    auto dens = [](double rho) {
        return [rho](double x, double y) {
            double o = 1.0 - rho * rho;
            return std::exp(-(x * x - 2.0 * rho * x * y + y * y) / (2.0 * o)) /
                   (2.0 * msmsim::special::pi * std::sqrt(o));
        };
    };
    for (double rho : {-0.99, -0.6, 0.0, 0.45, 0.93, 0.995}) {
        for (double x : {-1.2, 0.3}) {
            for (double y : {-0.4, 1.5}) {
                double ref = oracle::simp2d(dens(rho), -9.0, x, -9.0, y);
                CHECK(std::fabs(bvn_cdf(x, y, rho) - ref) < 5e-9);
            }
        }
    }
}

TEST_CASE("bivariate t helper: fractional df path agrees with integer path",
          "[copulas][special]") {
    using msmsim::special::bvt_cdf;
    for (double rho : {-0.5, 0.3}) {
        for (double x : {-0.8, 0.6}) {
            for (double y : {-0.2, 1.1}) {
                double exact = bvt_cdf(x, y, rho, 5.0);
                double integ = bvt_cdf(x, y, rho, 5.0 + 1e-9);
                CHECK(std::fabs(exact - integ) < 1e-8);
            }
        }
    }
}

TEST_CASE("copula parameter validation", "[copulas]") {
    CHECK_THROWS_AS(gauss(1.0).validate(), config_error);
    CHECK_THROWS_AS(tcop(0.2, 0.0).validate(), config_error);
    CHECK_THROWS_AS(clayton(-1.0).validate(), config_error);
    CHECK_THROWS_AS(frank(0.0).validate(), config_error);
    CHECK_NOTHROW(tcop(-0.5, 5.0).validate());
}
