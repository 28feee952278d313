#ifndef MSMSIM_SCENARIO_HPP
#define MSMSIM_SCENARIO_HPP

// Scenario data model: baseline block, time-varying covariate and treatment
// processes, marginal structural models, copula matrices, and the validation
// that ties variable references to the generation order.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "copulas.hpp"
#include "dists.hpp"
#include "errors.hpp"

namespace msmsim {

enum class ScenarioKind { terminal, survival };

struct BaselineVar {
    std::string name;
    DistributionSpec dist;
};

// One ordered entry of the baseline block: either a plain baseline variable
// or the time-0 value of a covariate process (latent processes may precede
// the other baseline variables).
struct BaselineSlot {
    bool is_process = false;
    int index = 0; // into baseline[] or covariates[]
};

struct CovariateProcess {
    std::string name;
    bool latent = false;
    bool step0_in_baseline = false;
    std::vector<DistributionSpec> dists; // size K+1; [0] unused if in baseline
    // Copulas linking the outcome quantile to this process.  Terminal
    // scenarios use row K only (theta_j, j=0..K); survival scenarios use the
    // full lower triangle (theta_{k,j}, j<=k).
    std::vector<std::vector<CopulaSpec>> copulas;
};

struct TreatmentProcess {
    std::string name;
    std::vector<DistributionSpec> dists; // size K+1

    bool degenerate_at(int k) const { return dists[k].family == DistFamily::point; }
};

enum class HazardForm { cox_constant, additive, discrete_logistic, discrete_latent };

// Survival-outcome marginal structural model.  Cox/additive forms model the
// incremental failure time within the unit interval; the discrete forms model
// the event indicator through a latent variable cut at a threshold.
struct SurvivalMsm {
    HazardForm form = HazardForm::cox_constant;
    double lambda0 = 0.0;     // cox_constant / additive
    LinearPredictor g;        // identity-link predictor over treatments and z
    DistributionSpec latent;  // discrete_latent: latent law under do()
    double threshold = 0.0;   // discrete_latent cut point

    // Survivors occupy the upper tail of the latent uniform for
    // incremental-time models (ytilde >= 1) and the lower tail for
    // threshold models (latent <= C).
    bool upper_tail_survival() const {
        return form == HazardForm::cox_constant || form == HazardForm::additive;
    }

    template <class State>
    double rate(const State& s, int k) const {
        double r = 0.0;
        if (form == HazardForm::cox_constant)
            r = lambda0 * std::exp(g.eval(s, k));
        else if (form == HazardForm::additive)
            r = lambda0 + g.eval(s, k);
        if (!(r > 0.0))
            throw engine_error("hazard rate must be positive at time " +
                               std::to_string(k) + " (got " + std::to_string(r) + ")");
        return r;
    }

    // P(event within the interval) given do(treatments), z, survival.
    template <class State>
    double fail_prob(const State& s, int k) const {
        switch (form) {
        case HazardForm::cox_constant:
        case HazardForm::additive:
            return -std::expm1(-rate(s, k));
        case HazardForm::discrete_logistic:
            return g.eval(s, k); // expit link applied in the predictor
        case HazardForm::discrete_latent: {
            ResolvedDist d = latent.resolve(s, k);
            return 1.0 - dist_cdf(d, threshold);
        }
        }
        return 0.0;
    }

    struct Inversion {
        double ytilde = 0.0; // incremental time, or the latent value
        bool event = false;
        double exposure = 1.0; // time at risk within the interval
    };

    template <class State>
    Inversion invert(double ustar, const State& s, int k) const {
        Inversion out;
        switch (form) {
        case HazardForm::cox_constant:
        case HazardForm::additive: {
            double r = rate(s, k);
            out.ytilde = -std::log1p(-ustar) / r;
            out.event = out.ytilde < 1.0;
            out.exposure = std::min(1.0, out.ytilde);
            return out;
        }
        case HazardForm::discrete_logistic: {
            double p = g.eval(s, k);
            out.ytilde = ustar;
            out.event = ustar > 1.0 - p;
            return out;
        }
        case HazardForm::discrete_latent: {
            ResolvedDist d = latent.resolve(s, k);
            out.ytilde = dist_quantile(d, ustar);
            out.event = out.ytilde > threshold;
            return out;
        }
        }
        return out;
    }
};

struct CompetingSpec {
    enum class Mode { conditional, msm };
    Mode mode = Mode::conditional;
    DistributionSpec conditional; // incremental time given the full history
    SurvivalMsm msm;              // mode 2
    // Mode-2 copula matrices per covariate process (independence if empty).
    std::vector<std::vector<std::vector<CopulaSpec>>> copulas;
};

struct CensoringSpec {
    DistributionSpec conditional; // incremental censoring time given history
};

// Per-individual simulation state; also the reference resolver for linear
// predictors.
struct PathState {
    std::vector<double> z;
    std::vector<std::vector<double>> cov;   // [process][time]
    std::vector<std::vector<double>> trt;   // [process][time]
    std::vector<std::vector<double>> cov_w; // latent uniforms per (process, time)

    double value(VarKind kind, int index, int t) const {
        switch (kind) {
        case VarKind::baseline:
            return z.at(index);
        case VarKind::covariate:
            if (t < 0) throw engine_error("covariate reference before time 0");
            return cov.at(index).at(t);
        case VarKind::treatment:
            if (t < 0) throw engine_error("treatment reference before time 0");
            return trt.at(index).at(t);
        }
        return 0.0;
    }
};

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::terminal;
    int K = 0;

    std::vector<BaselineVar> baseline;
    std::vector<BaselineSlot> baseline_order;
    std::vector<CovariateProcess> covariates;
    std::vector<TreatmentProcess> treatments;

    DistributionSpec terminal_msm; // kind == terminal; refs z + treatments only
    SurvivalMsm survival_msm;      // kind == survival
    std::optional<CompetingSpec> competing;
    std::optional<CensoringSpec> censoring;

    int n_baseline() const { return static_cast<int>(baseline.size()); }
    int n_cov() const { return static_cast<int>(covariates.size()); }
    int n_trt() const { return static_cast<int>(treatments.size()); }

    // Draw-slot layout within a step: covariates, then treatments; the
    // outcome, competing-event and censoring draws sit at fixed high slots so
    // adding a variable never shifts the uniforms other draws consume.
    int slot_cov(int p) const { return p; }
    int slot_trt(int t) const { return n_cov() + t; }
    static constexpr int slot_outcome() { return 61; }
    static constexpr int slot_competing() { return 62; }
    static constexpr int slot_censoring() { return 63; }

    int find_baseline(const std::string& name) const {
        for (int i = 0; i < n_baseline(); ++i)
            if (baseline[i].name == name) return i;
        return -1;
    }
    int find_cov(const std::string& name) const {
        for (int i = 0; i < n_cov(); ++i)
            if (covariates[i].name == name) return i;
        return -1;
    }
    int find_trt(const std::string& name) const {
        for (int i = 0; i < n_trt(); ++i)
            if (treatments[i].name == name) return i;
        return -1;
    }

    PathState make_state() const {
        PathState s;
        s.z.assign(baseline.size(), 0.0);
        s.cov.assign(covariates.size(), std::vector<double>(K + 1, 0.0));
        s.cov_w.assign(covariates.size(), std::vector<double>(K + 1, 0.0));
        s.trt.assign(treatments.size(), std::vector<double>(K + 1, 0.0));
        return s;
    }

    // Replace treatment laws by point masses to enforce a fixed regime.
    // Values may hold one entry (all steps) or K+1 entries.
    ScenarioSpec with_regime(
        const std::map<std::string, std::vector<double>>& regime) const {
        ScenarioSpec out = *this;
        for (const auto& [name, values] : regime) {
            int t = find_trt(name);
            if (t < 0)
                throw config_error("regime names unknown treatment '" + name + "'");
            if (values.size() != 1 && values.size() != static_cast<size_t>(K + 1))
                throw config_error("regime for '" + name + "' needs 1 or K+1 values");
            for (int k = 0; k <= K; ++k) {
                double v = values.size() == 1 ? values[0] : values[k];
                DistributionSpec d;
                d.family = DistFamily::point;
                LinearPredictor c;
                c.intercept = v;
                d.params = {c};
                d.label = "treatment " + name;
                out.treatments[t].dists[k] = d;
            }
        }
        return out;
    }

    void validate() const;

private:
    struct Avail {
        std::set<std::pair<int, int>> cov, trt; // (index, time)
        int n_base = 0;

        bool has(VarKind kind, int index, int t) const {
            switch (kind) {
            case VarKind::baseline: return index < n_base;
            case VarKind::covariate: return cov.count({index, t}) > 0;
            case VarKind::treatment: return trt.count({index, t}) > 0;
            }
            return false;
        }
    };

    void check_refs(const DistributionSpec& d, const Avail& a, int k,
                    const std::string& ctx) const {
        for (const auto& lp : d.params)
            check_refs_lp(lp, a, k, ctx);
    }

    void check_refs_lp(const LinearPredictor& lp, const Avail& a, int k,
                       const std::string& ctx) const {
        for (const auto& term : lp.terms) {
            for (const auto& r : term.refs) {
                if (r.kind == VarKind::baseline) continue;
                if (r.cum_from >= 0) {
                    for (int t = r.cum_from; t <= k; ++t)
                        if (!a.has(r.kind, r.index, t))
                            throw config_error(ctx + ": reference cum(" + r.name +
                                               ") needs value at time " +
                                               std::to_string(t) +
                                               " which is not yet generated");
                    continue;
                }
                int t = k - r.lag;
                if (t < 0)
                    throw config_error(ctx + ": reference " + r.name + "[" +
                                       std::to_string(-r.lag) +
                                       "] addresses time before 0 at step " +
                                       std::to_string(k));
                if (!a.has(r.kind, r.index, t))
                    throw config_error(
                        ctx + ": reference " + r.name +
                        (r.lag ? "[" + std::to_string(-r.lag) + "]" : "") +
                        " is a future reference at step " + std::to_string(k));
            }
        }
    }
};

inline void ScenarioSpec::validate() const {
    if (K < 0) throw config_error("K must be >= 0");
    if (n_cov() + n_trt() > 60)
        throw config_error("at most 60 per-step variables are supported");
    if (baseline_order.size() > 60)
        throw config_error("at most 60 baseline variables are supported");
    if (kind == ScenarioKind::survival && competing && censoring &&
        competing->mode == CompetingSpec::Mode::msm)
        ; // both allowed; truncation handles ordering

    // Names must be unique across the registry.
    std::set<std::string> names;
    auto add_name = [&](const std::string& n) {
        if (!names.insert(n).second)
            throw config_error("duplicate variable name '" + n + "'");
    };
    for (const auto& b : baseline) add_name(b.name);
    for (const auto& c : covariates) add_name(c.name);
    for (const auto& t : treatments) add_name(t.name);

    // Copula matrices must be complete for every covariate process.
    for (const auto& c : covariates) {
        if (kind == ScenarioKind::terminal) {
            if (c.copulas.size() != 1 ||
                c.copulas[0].size() != static_cast<size_t>(K + 1))
                throw config_error("copula vector for process '" + c.name +
                                   "' must cover j = 0.." + std::to_string(K));
        } else {
            if (c.copulas.size() != static_cast<size_t>(K + 1))
                throw config_error("copula matrix for process '" + c.name +
                                   "' must cover k = 0.." + std::to_string(K));
            for (int k = 0; k <= K; ++k)
                if (c.copulas[k].size() != static_cast<size_t>(k + 1))
                    throw config_error("copula matrix for process '" + c.name +
                                       "' is missing entries in row " +
                                       std::to_string(k));
        }
        for (const auto& row : c.copulas)
            for (const auto& cop : row) cop.validate();
    }

    // Walk the generation order and check every reference resolves to an
    // already-generated value.
    Avail avail;
    for (const auto& slot : baseline_order) {
        if (slot.is_process) {
            const auto& p = covariates[slot.index];
            check_refs(p.dists[0], avail, 0,
                       "baseline declaration of process " + p.name);
            avail.cov.insert({slot.index, 0});
        } else {
            check_refs(baseline[slot.index].dist, avail, 0,
                       "baseline variable " + baseline[slot.index].name);
            ++avail.n_base;
        }
    }
    if (avail.n_base != n_baseline())
        throw config_error("baseline ordering does not cover all baseline variables");
    for (int k = 0; k <= K; ++k) {
        for (int p = 0; p < n_cov(); ++p) {
            if (k == 0 && covariates[p].step0_in_baseline) continue;
            check_refs(covariates[p].dists[k], avail, k,
                       "covariate " + covariates[p].name);
            avail.cov.insert({p, k});
        }
        for (int t = 0; t < n_trt(); ++t) {
            check_refs(treatments[t].dists[k], avail, k,
                       "treatment " + treatments[t].name);
            avail.trt.insert({t, k});
        }
        // The survival MSM is evaluated at every step.
        if (kind == ScenarioKind::survival) {
            check_refs_lp(survival_msm.g, avail, k, "survival msm");
            if (survival_msm.form == HazardForm::discrete_latent)
                check_refs(survival_msm.latent, avail, k, "survival msm latent");
            if (competing && competing->mode == CompetingSpec::Mode::msm)
                check_refs_lp(competing->msm.g, avail, k, "competing msm");
            if (competing && competing->mode == CompetingSpec::Mode::conditional)
                check_refs(competing->conditional, avail, k, "competing process");
            if (censoring)
                check_refs(censoring->conditional, avail, k, "censoring process");
        }
    }
    if (kind == ScenarioKind::terminal)
        check_refs(terminal_msm, avail, K, "outcome msm");

    // Marginality: the MSM may reference baseline variables and treatments,
    // never time-varying covariates.
    auto check_marginal = [&](const LinearPredictor& lp, const std::string& who) {
        for (const auto& term : lp.terms)
            for (const auto& r : term.refs)
                if (r.kind == VarKind::covariate)
                    throw config_error(who + " must be marginal: reference to "
                                       "time-varying covariate '" + r.name +
                                       "' is not allowed");
    };
    if (kind == ScenarioKind::terminal) {
        for (const auto& lp : terminal_msm.params) check_marginal(lp, "outcome msm");
    } else {
        check_marginal(survival_msm.g, "survival msm");
        if (survival_msm.form == HazardForm::discrete_latent)
            for (const auto& lp : survival_msm.latent.params)
                check_marginal(lp, "survival msm latent law");
        if (survival_msm.form == HazardForm::cox_constant && !(survival_msm.lambda0 > 0.0))
            throw config_error("cox msm needs lambda0 > 0");
        if (competing && competing->mode == CompetingSpec::Mode::msm)
            check_marginal(competing->msm.g, "competing msm");
    }

    // Competing-risk copula matrices, when present, must be complete too.
    if (competing && competing->mode == CompetingSpec::Mode::msm &&
        !competing->copulas.empty()) {
        if (competing->copulas.size() != static_cast<size_t>(n_cov()))
            throw config_error("competing copulas must cover every covariate process");
        for (const auto& mat : competing->copulas) {
            if (mat.size() != static_cast<size_t>(K + 1))
                throw config_error("competing copula matrix missing rows");
            for (int k = 0; k <= K; ++k)
                if (mat[k].size() != static_cast<size_t>(k + 1))
                    throw config_error("competing copula matrix missing entries");
        }
    }
}

// Clamp into the open unit interval before any copula call; the kernels
// reject exact endpoints.
inline double clamp_unit(double u) {
    return std::min(1.0 - 1e-12, std::max(1e-12, u));
}

// Function-evaluation instrumentation.  Counts engine-level calls into the
// distribution, copula, and MSM kernels, with per-step snapshots.
struct EvalCounter {
    std::uint64_t dist_quantile = 0;
    std::uint64_t copula_cdf = 0;
    std::uint64_t h_calls = 0;
    std::uint64_t hinv_calls = 0;
    std::uint64_t msm_cdf = 0;
    std::uint64_t msm_inverse = 0;
    std::vector<std::uint64_t> per_step;

    std::uint64_t total() const {
        return dist_quantile + copula_cdf + h_calls + hinv_calls + msm_cdf +
               msm_inverse;
    }

    void snapshot_step() { per_step.push_back(total() - already_); }
    void begin_step() { already_ = total(); }

private:
    std::uint64_t already_ = 0;
};

} // namespace msmsim

#endif
