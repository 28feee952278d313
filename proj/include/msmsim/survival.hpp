#ifndef MSMSIM_SURVIVAL_HPP
#define MSMSIM_SURVIVAL_HPP

// Time-to-event simulator: per-interval covariate/treatment generation
// conditional on survival, survivor renormalization of carried covariate
// quantiles, incremental unweaving, marginal inversion, and competing-event
// or censoring truncation.

#include "frugal.hpp"
#include "rng.hpp"
#include "scenario.hpp"

namespace msmsim {

// Distribution of a covariate quantile within the survivors of an interval.
// Incremental-time models condition on the upper tail of the outcome's
// latent uniform ({ytilde >= 1} i.e. {u > q}); q is the interval failure
// probability given the same history.
inline double renormalize_survivor_quantile(const CopulaSpec& c, double v, double q,
                                            EvalCounter* cnt = nullptr) {
    if (!(v > 0.0 && v < 1.0 && q > 0.0 && q < 1.0))
        throw domain_error("renormalize_survivor_quantile: arguments in (0,1)");
    if (q >= 1.0 - 1e-12)
        throw engine_error(
            "degenerate survival: interval failure probability is numerically 1");
    if (cnt) ++cnt->copula_cdf;
    double out = (v - copula_cdf(c, v, q)) / (1.0 - q);
    return clamp_unit(out);
}

// Lower-tail variant for threshold models, where survivors are {latent <= C}
// i.e. {u <= s}; s is the interval survival probability given the history.
inline double renormalize_survivor_quantile_lower(const CopulaSpec& c, double v,
                                                  double s,
                                                  EvalCounter* cnt = nullptr) {
    if (!(v > 0.0 && v < 1.0 && s > 0.0 && s < 1.0))
        throw domain_error("renormalize_survivor_quantile_lower: arguments in (0,1)");
    if (s <= 1e-12)
        throw engine_error(
            "degenerate survival: interval survival probability is numerically 0");
    if (cnt) ++cnt->copula_cdf;
    return clamp_unit(copula_cdf(c, v, s) / s);
}

// q_{k,j} = h(q_{k,j-1}, v_{k,j-1}); conditioning the interval failure (or
// survival) probability on one more step of the covariate history.
inline double update_q(const CopulaSpec& c, double q_prev, double v_prev,
                       EvalCounter* cnt = nullptr) {
    if (cnt) ++cnt->h_calls;
    return clamp_unit(h(c, clamp_unit(q_prev), clamp_unit(v_prev)));
}

// k+1 inverse h-functions from j = k down to j = 0 for one process
// (copula_row and v both indexed by j).
inline double unweave_incremental(const std::vector<CopulaSpec>& copula_row,
                                  const std::vector<double>& v, int k, double w3,
                                  EvalCounter* cnt = nullptr) {
    double xi = clamp_unit(w3);
    for (int j = k; j >= 0; --j) {
        if (cnt) ++cnt->hinv_calls;
        xi = clamp_unit(h_inv(copula_row[j], xi, clamp_unit(v[j])));
    }
    return xi;
}

struct SurvivalOutcome {
    PathState path;
    int steps = 0;               // number of executed intervals (rows)
    std::vector<double> ytilde;  // outcome draw per interval
    std::vector<double> ustar;   // marginal outcome quantile per interval
    std::vector<double> dtilde;  // competing draw per interval (if configured)
    std::vector<double> ctilde;  // censoring draw per interval (if configured)
    int event_step = -1;         // interval of the terminating event, -1 if none
    int event_type = 0;          // 0 none, 1 outcome, 2 competing, 3 censoring
};

inline const char* event_type_name(int t) {
    switch (t) {
    case 1: return "outcome";
    case 2: return "competing";
    case 3: return "censoring";
    }
    return "none";
}

namespace engine {

// Per-process carried survivor state: v_{k,j} and q_{k,j} for one
// outcome-linked covariate process.
struct ProcessSurvivorState {
    std::vector<double> v;
    std::vector<double> q;
};

// One marginal-outcome engine (used for the outcome and, in mode 2, for the
// competing event): holds per-process (v, q) matrices and the step logic.
struct OutcomeEngine {
    const SurvivalMsm* msm;
    const std::vector<std::vector<std::vector<CopulaSpec>>>* copulas; // [p][k][j]
    std::vector<ProcessSurvivorState> procs;
    bool upper_tail;

    void init(int n_proc) {
        procs.assign(n_proc, {});
        upper_tail = msm->upper_tail_survival();
    }

    const CopulaSpec& cop(int p, int k, int j) const { return (*copulas)[p][k][j]; }

    // Renormalize carried quantiles into this interval's survivors, then
    // append the fresh draws' quantiles.
    void advance_v(int k, const PathState& st, EvalCounter* cnt) {
        for (int p = 0; p < static_cast<int>(procs.size()); ++p) {
            auto& ps = procs[p];
            for (int j = 0; j < k; ++j) {
                ps.v[j] = upper_tail
                              ? renormalize_survivor_quantile(cop(p, k - 1, j),
                                                              ps.v[j], ps.q[j], cnt)
                              : renormalize_survivor_quantile_lower(
                                    cop(p, k - 1, j), ps.v[j], ps.q[j], cnt);
            }
            ps.v.push_back(clamp_unit(st.cov_w[p][k]));
        }
    }

    double unweave(int k, double w3, EvalCounter* cnt) const {
        double xi = clamp_unit(w3);
        for (int j = k; j >= 0; --j)
            for (int p = static_cast<int>(procs.size()) - 1; p >= 0; --p) {
                if (cnt) ++cnt->hinv_calls;
                xi = clamp_unit(h_inv(cop(p, k, j), xi, clamp_unit(procs[p].v[j])));
            }
        return xi;
    }

    // Prepare the q (or survivor-probability) row for the next interval.
    // The marginal interval probability is computed once and shared across
    // processes; each process then conditions it on its own history.
    void prepare_q(int k, const PathState& st, EvalCounter* cnt) {
        if (cnt) ++cnt->msm_cdf;
        double fp = msm->fail_prob(st, k);
        double q0 = clamp_unit(upper_tail ? fp : 1.0 - fp);
        for (int p = 0; p < static_cast<int>(procs.size()); ++p) {
            auto& ps = procs[p];
            ps.q.assign(ps.v.size(), q0);
            for (int j = 1; j <= k; ++j)
                ps.q[j] = update_q(cop(p, k, j - 1), ps.q[j - 1], ps.v[j - 1], cnt);
        }
    }
};

} // namespace engine

template <class Draws>
SurvivalOutcome simulate_survival(const ScenarioSpec& sc, const Draws& dr,
                                  EvalCounter* cnt = nullptr) {
    SurvivalOutcome out;
    out.path = sc.make_state();
    PathState& st = out.path;

    engine::simulate_baseline(sc, dr, st, cnt);

    // Copula matrices per process, as one container for the engine.
    std::vector<std::vector<std::vector<CopulaSpec>>> ycop(sc.n_cov());
    for (int p = 0; p < sc.n_cov(); ++p) ycop[p] = sc.covariates[p].copulas;

    engine::OutcomeEngine y_engine{&sc.survival_msm, &ycop, {}, true};
    y_engine.init(sc.n_cov());

    const bool has_competing = sc.competing.has_value();
    const bool competing_msm =
        has_competing && sc.competing->mode == CompetingSpec::Mode::msm;
    std::vector<std::vector<std::vector<CopulaSpec>>> dcop;
    engine::OutcomeEngine d_engine{nullptr, nullptr, {}, true};
    if (competing_msm) {
        dcop = sc.competing->copulas;
        if (dcop.empty()) {
            // Independence by default.
            dcop.assign(sc.n_cov(), std::vector<std::vector<CopulaSpec>>(
                                        sc.K + 1, std::vector<CopulaSpec>()));
            for (int k = 0; k <= sc.K; ++k)
                for (auto& m : dcop) m[k].assign(k + 1, CopulaSpec{});
        }
        d_engine.msm = &sc.competing->msm;
        d_engine.copulas = &dcop;
        d_engine.init(sc.n_cov());
    }

    for (int k = 0; k <= sc.K; ++k) {
        if (cnt) cnt->begin_step();
        engine::simulate_step(sc, k, dr, st, cnt);

        y_engine.advance_v(k, st, cnt);
        double ustar = y_engine.unweave(k, dr.at(k, sc.slot_outcome()), cnt);
        if (cnt) ++cnt->msm_inverse;
        auto inv = sc.survival_msm.invert(ustar, st, k);
        out.ytilde.push_back(inv.ytilde);
        out.ustar.push_back(ustar);

        // Terminating-event candidates within this interval: (time, type).
        double best_time = std::numeric_limits<double>::infinity();
        int best_type = 0;
        if (inv.event) {
            best_time = sc.survival_msm.upper_tail_survival() ? inv.ytilde : 1.0;
            best_type = 1;
        }

        if (competing_msm) {
            d_engine.advance_v(k, st, cnt);
            double dstar = d_engine.unweave(k, dr.at(k, sc.slot_competing()), cnt);
            if (cnt) ++cnt->msm_inverse;
            auto dinv = sc.competing->msm.invert(dstar, st, k);
            out.dtilde.push_back(dinv.ytilde);
            if (dinv.event) {
                double t = sc.competing->msm.upper_tail_survival() ? dinv.ytilde : 1.0;
                if (t < best_time) { best_time = t; best_type = 2; }
            }
        } else if (has_competing) {
            double wd = dr.at(k, sc.slot_competing());
            ResolvedDist d = sc.competing->conditional.resolve(st, k);
            if (cnt) ++cnt->dist_quantile;
            double dt = dist_quantile(d, wd);
            out.dtilde.push_back(dt);
            if (dt < 1.0 && dt < best_time) { best_time = dt; best_type = 2; }
        }

        if (sc.censoring) {
            double wc = dr.at(k, sc.slot_censoring());
            ResolvedDist d = sc.censoring->conditional.resolve(st, k);
            if (cnt) ++cnt->dist_quantile;
            double ct = dist_quantile(d, wc);
            out.ctilde.push_back(ct);
            if (ct < 1.0 && ct < best_time) { best_time = ct; best_type = 3; }
        }

        ++out.steps;
        if (best_type != 0) {
            out.event_step = k;
            out.event_type = best_type;
            if (cnt) cnt->snapshot_step();
            break;
        }

        if (k < sc.K) {
            y_engine.prepare_q(k, st, cnt);
            if (competing_msm) d_engine.prepare_q(k, st, cnt);
        }
        if (cnt) cnt->snapshot_step();
    }
    return out;
}

inline SurvivalOutcome simulate_survival_individual(const ScenarioSpec& sc,
                                                    std::uint64_t master_seed,
                                                    std::uint64_t rep,
                                                    std::uint64_t individual,
                                                    EvalCounter* cnt = nullptr) {
    IndividualDraws dr(make_stream_key(master_seed, RngTag::simulate, rep),
                       individual);
    return simulate_survival(sc, dr, cnt);
}

} // namespace msmsim

#endif
