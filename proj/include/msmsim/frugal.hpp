#ifndef MSMSIM_FRUGAL_HPP
#define MSMSIM_FRUGAL_HPP

// Terminal-outcome simulator: sequential covariate/treatment generation by
// inversion, then outcome generation by unweaving the pair-copula
// construction around the causal margin.

#include "rng.hpp"
#include "scenario.hpp"

namespace msmsim {

struct TerminalOutcome {
    PathState path;
    double u_star = 0.0;
    double y = 0.0;
};

namespace engine {

// Draw every baseline-block variable in declaration order; process entries
// fill the process's time-0 value and retain the uniform for unweaving.
template <class Draws>
void simulate_baseline(const ScenarioSpec& sc, const Draws& dr, PathState& st,
                       EvalCounter* cnt) {
    for (int b = 0; b < static_cast<int>(sc.baseline_order.size()); ++b) {
        const auto& slot = sc.baseline_order[b];
        double w = dr.at(-1, b);
        if (slot.is_process) {
            const auto& proc = sc.covariates[slot.index];
            ResolvedDist d = proc.dists[0].resolve(st, 0);
            if (cnt) ++cnt->dist_quantile;
            st.cov[slot.index][0] = dist_quantile(d, w);
            st.cov_w[slot.index][0] = w;
        } else {
            ResolvedDist d = sc.baseline[slot.index].dist.resolve(st, 0);
            if (cnt) ++cnt->dist_quantile;
            st.z[slot.index] = dist_quantile(d, w);
        }
    }
}

// One follow-up step: covariates then treatments, each consuming the uniform
// at its own slot so scenario edits never shift other draws.
template <class Draws>
void simulate_step(const ScenarioSpec& sc, int k, const Draws& dr, PathState& st,
                   EvalCounter* cnt) {
    for (int p = 0; p < sc.n_cov(); ++p) {
        if (k == 0 && sc.covariates[p].step0_in_baseline) continue;
        double w = dr.at(k, sc.slot_cov(p));
        ResolvedDist d = sc.covariates[p].dists[k].resolve(st, k);
        if (cnt) ++cnt->dist_quantile;
        st.cov[p][k] = dist_quantile(d, w);
        st.cov_w[p][k] = w;
    }
    for (int t = 0; t < sc.n_trt(); ++t) {
        double w = dr.at(k, sc.slot_trt(t));
        ResolvedDist d = sc.treatments[t].dists[k].resolve(st, k);
        if (cnt) ++cnt->dist_quantile;
        st.trt[t][k] = dist_quantile(d, w);
    }
}

} // namespace engine

// Recursive inverse h-functions strip the conditioning of the outcome on the
// covariate history: innermost is the last-generated process value at step K,
// outermost the first process value at step 0.
inline double unweave_outcome(const ScenarioSpec& sc, const PathState& st,
                              double w_y, EvalCounter* cnt = nullptr) {
    double nu = clamp_unit(w_y);
    for (int k = sc.K; k >= 0; --k) {
        for (int p = sc.n_cov() - 1; p >= 0; --p) {
            const CopulaSpec& cop = sc.covariates[p].copulas[0][k];
            if (cnt) ++cnt->hinv_calls;
            nu = clamp_unit(h_inv(cop, nu, clamp_unit(st.cov_w[p][k])));
        }
    }
    return nu;
}

template <class Draws>
TerminalOutcome simulate_terminal(const ScenarioSpec& sc, const Draws& dr,
                                  EvalCounter* cnt = nullptr) {
    TerminalOutcome out;
    out.path = sc.make_state();
    engine::simulate_baseline(sc, dr, out.path, cnt);
    for (int k = 0; k <= sc.K; ++k)
        engine::simulate_step(sc, k, dr, out.path, cnt);
    double w_y = dr.at(sc.K, sc.slot_outcome());
    out.u_star = unweave_outcome(sc, out.path, w_y, cnt);
    ResolvedDist msm = sc.terminal_msm.resolve(out.path, sc.K);
    if (cnt) ++cnt->msm_inverse;
    out.y = dist_quantile(msm, out.u_star);
    return out;
}

// Convenience entry point: one individual from (scenario, master seed,
// replication, id), deterministic and schedule-independent.
inline TerminalOutcome simulate_terminal_individual(const ScenarioSpec& sc,
                                                    std::uint64_t master_seed,
                                                    std::uint64_t rep,
                                                    std::uint64_t individual,
                                                    EvalCounter* cnt = nullptr) {
    IndividualDraws dr(make_stream_key(master_seed, RngTag::simulate, rep),
                       individual);
    return simulate_terminal(sc, dr, cnt);
}

} // namespace msmsim

#endif
