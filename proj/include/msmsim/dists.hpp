#ifndef MSMSIM_DISTS_HPP
#define MSMSIM_DISTS_HPP

// Univariate distribution kernel: cdf, quantile, and density for every law a
// scenario can declare, with parameters that may be linear-predictor
// functions of the covariate history.

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "special.hpp"

namespace msmsim {

enum class VarKind { baseline, covariate, treatment };

// A compiled reference into the scenario's variable registry.  `lag` reads
// the value at time k-lag; `cum_from >= 0` instead sums the variable from
// that time index through the current one.
struct VarRef {
    VarKind kind = VarKind::baseline;
    int index = 0;
    int lag = 0;
    int cum_from = -1;
    std::string name;
};

struct PredictorTerm {
    double coef = 0.0;
    std::vector<VarRef> refs; // one ref, or two for a pairwise product
};

enum class Link { identity, expit, exp_link };

inline double expit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Linear predictor: link(intercept + sum of coef * ref [* ref]).  The State
// type must provide value(VarKind, index, time) and its current max time.
struct LinearPredictor {
    double intercept = 0.0;
    std::vector<PredictorTerm> terms;
    Link link = Link::identity;

    template <class State>
    double ref_value(const State& s, const VarRef& r, int k) const {
        if (r.cum_from >= 0) {
            double acc = 0.0;
            for (int t = r.cum_from; t <= k; ++t)
                acc += s.value(r.kind, r.index, t);
            return acc;
        }
        int t = r.kind == VarKind::baseline ? 0 : k - r.lag;
        return s.value(r.kind, r.index, t);
    }

    template <class State>
    double eval(const State& s, int k) const {
        double acc = intercept;
        for (const auto& term : terms) {
            double v = term.coef;
            for (const auto& r : term.refs)
                v *= ref_value(s, r, k);
            acc += v;
        }
        switch (link) {
        case Link::identity:
            return acc;
        case Link::expit:
            // expit output is mathematically in (0,1); clamp the evaluated
            // value away from the endpoints so downstream logs stay finite.
            return std::min(1.0 - 1e-12, std::max(1e-12, expit(acc)));
        case Link::exp_link:
            return std::exp(acc);
        }
        return acc;
    }

    bool constant() const { return terms.empty() && link == Link::identity; }
};

enum class DistFamily { normal, gamma, exponential, bernoulli, uniform, point };

inline const char* family_name(DistFamily f) {
    switch (f) {
    case DistFamily::normal: return "normal";
    case DistFamily::gamma: return "gamma";
    case DistFamily::exponential: return "exponential";
    case DistFamily::bernoulli: return "bernoulli";
    case DistFamily::uniform: return "uniform";
    case DistFamily::point: return "point";
    }
    return "?";
}

inline int family_arity(DistFamily f) {
    switch (f) {
    case DistFamily::normal: return 2;
    case DistFamily::gamma: return 2;
    case DistFamily::exponential: return 1;
    case DistFamily::bernoulli: return 1;
    case DistFamily::uniform: return 2;
    case DistFamily::point: return 1;
    }
    return 0;
}

// A distribution whose parameters have been evaluated on a concrete history.
struct ResolvedDist {
    DistFamily family;
    double a = 0.0;
    double b = 0.0;
};

struct DistributionSpec {
    DistFamily family = DistFamily::point;
    std::vector<LinearPredictor> params;
    std::string label; // variable name, used in error context

    template <class State>
    ResolvedDist resolve(const State& s, int k) const {
        ResolvedDist r;
        r.family = family;
        r.a = params[0].eval(s, k);
        if (params.size() > 1) r.b = params[1].eval(s, k);
        check_admissible(r, label, k);
        return r;
    }

    static void check_admissible(const ResolvedDist& r, const std::string& label,
                                 int k) {
        auto fail = [&](const std::string& msg) {
            throw engine_error(label + " at time " + std::to_string(k) + ": " + msg);
        };
        if (!std::isfinite(r.a) || (family_arity(r.family) > 1 && !std::isfinite(r.b)))
            fail("parameter evaluated to a non-finite value");
        switch (r.family) {
        case DistFamily::normal:
            if (r.b <= 0.0) fail("sd must be > 0 (got " + std::to_string(r.b) + ")");
            break;
        case DistFamily::gamma:
            if (r.a <= 0.0) fail("shape must be > 0 (got " + std::to_string(r.a) + ")");
            if (r.b <= 0.0) fail("scale must be > 0 (got " + std::to_string(r.b) + ")");
            break;
        case DistFamily::exponential:
            if (r.a <= 0.0) fail("rate must be > 0 (got " + std::to_string(r.a) + ")");
            break;
        case DistFamily::bernoulli:
            if (r.a < 0.0 || r.a > 1.0)
                fail("prob must lie in [0,1] (got " + std::to_string(r.a) + ")");
            break;
        case DistFamily::uniform:
            if (!(r.a < r.b)) fail("uniform needs lo < hi");
            break;
        case DistFamily::point:
            break;
        }
    }
};

// ---------------------------------------------------------------------------
// Kernels on resolved distributions.

inline double dist_cdf(const ResolvedDist& d, double x) {
    switch (d.family) {
    case DistFamily::normal:
        return special::norm_cdf((x - d.a) / d.b);
    case DistFamily::gamma:
        return x <= 0.0 ? 0.0 : special::gammap(d.a, x / d.b);
    case DistFamily::exponential:
        return x <= 0.0 ? 0.0 : -std::expm1(-d.a * x);
    case DistFamily::bernoulli:
        if (x < 0.0) return 0.0;
        if (x < 1.0) return 1.0 - d.a;
        return 1.0;
    case DistFamily::uniform:
        return std::min(1.0, std::max(0.0, (x - d.a) / (d.b - d.a)));
    case DistFamily::point:
        return x >= d.a ? 1.0 : 0.0;
    }
    return 0.0;
}

inline double dist_pdf(const ResolvedDist& d, double x) {
    switch (d.family) {
    case DistFamily::normal:
        return special::norm_pdf((x - d.a) / d.b) / d.b;
    case DistFamily::gamma: {
        if (x <= 0.0) return 0.0;
        double t = x / d.b;
        return std::exp((d.a - 1.0) * std::log(t) - t - std::lgamma(d.a)) / d.b;
    }
    case DistFamily::exponential:
        return x < 0.0 ? 0.0 : d.a * std::exp(-d.a * x);
    case DistFamily::uniform:
        return (x < d.a || x > d.b) ? 0.0 : 1.0 / (d.b - d.a);
    default:
        throw domain_error("dist_pdf: no density for discrete family");
    }
}

namespace detail {

inline double gamma_quantile(double shape, double scale, double u) {
    double hi = shape * scale + 40.0 * std::sqrt(shape) * scale;
    for (int i = 0; i < 64 && special::gammap(shape, hi / scale) < u; ++i)
        hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-10; ++i) {
        double mid = 0.5 * (lo + hi);
        if (special::gammap(shape, mid / scale) < u)
            lo = mid;
        else
            hi = mid;
    }
    // Newton polish inside the final bracket.
    double x = 0.5 * (lo + hi);
    ResolvedDist g{DistFamily::gamma, shape, scale};
    for (int i = 0; i < 3; ++i) {
        double f = special::gammap(shape, x / scale) - u;
        double df = dist_pdf(g, x);
        if (df <= 0.0) break;
        double step = f / df;
        double nx = x - step;
        if (nx <= lo || nx >= hi) break;
        x = nx;
    }
    return x;
}

} // namespace detail

inline double dist_quantile(const ResolvedDist& d, double u) {
    if (!(u > 0.0 && u < 1.0))
        throw domain_error("dist_quantile: u must lie in (0,1)");
    switch (d.family) {
    case DistFamily::normal:
        return d.a + d.b * special::norm_quantile(u);
    case DistFamily::gamma:
        return detail::gamma_quantile(d.a, d.b, u);
    case DistFamily::exponential:
        return -std::log1p(-u) / d.a;
    case DistFamily::bernoulli:
        // Larger uniforms map to the event: 1{u > 1 - p}.
        return u > 1.0 - d.a ? 1.0 : 0.0;
    case DistFamily::uniform:
        return d.a + u * (d.b - d.a);
    case DistFamily::point:
        return d.a;
    }
    return 0.0;
}

} // namespace msmsim

#endif
