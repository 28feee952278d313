#ifndef MSMSIM_TEST_SCENARIOS_HPP
#define MSMSIM_TEST_SCENARIOS_HPP

// Scenario builders shared across the engine test suites.

#include <msmsim/scenario.hpp>

#include <map>

namespace ts {

using namespace msmsim;

inline VarRef bref(int i, const char* n) { return {VarKind::baseline, i, 0, -1, n}; }
inline VarRef cref(int i, int lag = 0, const char* n = "L") {
    return {VarKind::covariate, i, lag, -1, n};
}
inline VarRef tref(int i, int lag = 0, const char* n = "A") {
    return {VarKind::treatment, i, lag, -1, n};
}
inline VarRef tcum(int i, int from, const char* n = "A") {
    return {VarKind::treatment, i, 0, from, n};
}

inline LinearPredictor lpc(double c) {
    LinearPredictor p;
    p.intercept = c;
    return p;
}

inline LinearPredictor lin(double intercept, std::vector<PredictorTerm> terms,
                           Link link = Link::identity) {
    LinearPredictor p;
    p.intercept = intercept;
    p.terms = std::move(terms);
    p.link = link;
    return p;
}

inline DistributionSpec dist1(DistFamily f, LinearPredictor a, std::string label) {
    DistributionSpec d;
    d.family = f;
    d.params = {std::move(a)};
    d.label = std::move(label);
    return d;
}

inline DistributionSpec dist2(DistFamily f, LinearPredictor a, LinearPredictor b,
                              std::string label) {
    DistributionSpec d;
    d.family = f;
    d.params = {std::move(a), std::move(b)};
    d.label = std::move(label);
    return d;
}

inline std::vector<std::vector<CopulaSpec>> flat_copulas(int K, CopulaSpec c) {
    return {std::vector<CopulaSpec>(K + 1, c)};
}

inline std::vector<std::vector<CopulaSpec>> tri_copulas(int K, CopulaSpec c) {
    std::vector<std::vector<CopulaSpec>> m(K + 1);
    for (int k = 0; k <= K; ++k) m[k].assign(k + 1, c);
    return m;
}

inline CopulaSpec gauss_c(double rho) { return {CopulaFamily::gaussian, rho, 0.0}; }
inline CopulaSpec t_c(double rho, double df) {
    return {CopulaFamily::student_t, rho, df};
}
inline CopulaSpec indep_c() { return {}; }

// Iron supplementation and anemia at delivery over K = 4 follow-ups.
inline ScenarioSpec anemia(double beta, CopulaSpec cop = t_c(-0.5, 5.0)) {
    ScenarioSpec sc;
    sc.kind = ScenarioKind::terminal;
    sc.K = 4;
    sc.baseline = {
        {"B", dist1(DistFamily::bernoulli, lpc(0.1), "baseline B")},
        {"C", dist2(DistFamily::uniform, lpc(25.0), lpc(35.0), "baseline C")}};
    sc.baseline_order = {{false, 0}, {false, 1}};

    CovariateProcess L;
    L.name = "L";
    L.dists.resize(sc.K + 1);
    L.dists[0] = dist2(DistFamily::normal,
                       lin(11.0, {{-0.05, {bref(0, "B")}}, {-0.02, {bref(1, "C")}}}),
                       lpc(0.5), "covariate L");
    for (int k = 1; k <= sc.K; ++k)
        L.dists[k] =
            dist2(DistFamily::normal,
                  lin(0.0, {{1.0, {cref(0, 1)}}, {0.5, {tref(0, 1)}}}), lpc(0.1),
                  "covariate L");
    L.copulas = flat_copulas(sc.K, cop);
    sc.covariates = {L};

    TreatmentProcess A;
    A.name = "A";
    A.dists.resize(sc.K + 1);
    A.dists[0] = dist1(DistFamily::bernoulli, lpc(0.5), "treatment A");
    A.dists[1] = dist1(DistFamily::point, lin(0.0, {{1.0, {tref(0, 1)}}}),
                       "treatment A");
    A.dists[2] = A.dists[1];
    for (int k = 3; k <= sc.K; ++k)
        A.dists[k] = dist1(
            DistFamily::bernoulli,
            lin(10.0, {{-1.0, {cref(0)}}, {0.1, {tref(0, 1)}}}, Link::expit),
            "treatment A");
    sc.treatments = {A};

    // P(Y=1 | do(A..), B, C) = expit(-2 + 0.1 B + 0.02 C - beta * cum(A, 1)).
    sc.terminal_msm =
        dist1(DistFamily::bernoulli,
              lin(-2.0,
                  {{0.1, {bref(0, "B")}},
                   {0.02, {bref(1, "C")}},
                   {-beta, {tcum(0, 1)}}},
                  Link::expit),
              "outcome msm");
    sc.validate();
    return sc;
}

// Cardiovascular-outcomes trial with concomitant drop-in treatment: seven
// half-yearly intervals (K = 6), randomized primary treatment A, drop-in
// process S driven by HbA1c.
struct CvTrialParams {
    double lambda0 = 0.017811;      // half-yearly baseline hazard
    double betaA = std::log(0.83);  // primary-treatment log hazard ratio
    double betaS = std::log(0.9);   // drop-in log hazard ratio
    double betaAS = 0.05;           // interaction
    double a0 = -9.5, a1 = 0.5, a2 = 0.1, a3 = -1.5; // drop-in uptake model
    CopulaSpec cop = t_c(-0.5, 5.0);
    bool no_dropin = false;
};

inline ScenarioSpec cv_trial(const CvTrialParams& p = {}) {
    ScenarioSpec sc;
    sc.kind = ScenarioKind::survival;
    sc.K = 6;
    sc.baseline = {{"B", dist1(DistFamily::bernoulli, lpc(0.7), "baseline B")}};
    sc.baseline_order = {{false, 0}};

    CovariateProcess L;
    L.name = "L";
    L.dists.resize(sc.K + 1);
    L.dists[0] = dist2(DistFamily::gamma, lin(25.0, {{0.8, {bref(0, "B")}}}),
                       lpc(2.5), "covariate L");
    for (int k = 1; k <= sc.K; ++k)
        L.dists[k] = dist2(DistFamily::gamma,
                           lin(0.0,
                               {{400.0, {cref(0, 1)}},
                                {80.0, {bref(0, "B")}},
                                {-200.0, {tref(1, 1, "S")}},
                                {-400.0, {tref(0, 1)}}}),
                           lpc(1.0 / 400.0), "covariate L");
    L.copulas = tri_copulas(sc.K, p.cop);
    sc.covariates = {L};

    TreatmentProcess A;
    A.name = "A";
    A.dists.resize(sc.K + 1);
    A.dists[0] = dist1(DistFamily::bernoulli, lpc(0.5), "treatment A");
    for (int k = 1; k <= sc.K; ++k)
        A.dists[k] =
            dist1(DistFamily::point, lin(0.0, {{1.0, {tref(0, 1)}}}), "treatment A");

    TreatmentProcess S;
    S.name = "S";
    S.dists.resize(sc.K + 1);
    if (p.no_dropin) {
        for (int k = 0; k <= sc.K; ++k)
            S.dists[k] = dist1(DistFamily::bernoulli, lpc(0.0), "treatment S");
    } else {
        S.dists[0] = dist1(DistFamily::bernoulli, lpc(0.1), "treatment S");
        for (int k = 1; k <= sc.K; ++k)
            S.dists[k] = dist1(DistFamily::bernoulli,
                               lin(p.a0,
                                   {{p.a1, {bref(0, "B")}},
                                    {p.a2, {cref(0)}},
                                    {p.a3, {tref(0)}}},
                                   Link::expit),
                               "treatment S");
    }
    sc.treatments = {A, S};

    sc.survival_msm.form = HazardForm::cox_constant;
    sc.survival_msm.lambda0 = p.lambda0;
    sc.survival_msm.g = lin(0.0, {{p.betaA, {tref(0)}},
                                  {p.betaS, {tref(1, 0, "S")}},
                                  {p.betaAS, {tref(0), tref(1, 0, "S")}}});
    sc.validate();
    return sc;
}

// Two time-varying confounders over K = 6 intervals.
struct TwoConfounderParams {
    double lambda0 = std::exp(-2.0);
    double betaC = -0.5, betaA = -0.5, betaCA = 0.3;
    double rhoL = 0.9, rhoW = 0.7;
};

inline ScenarioSpec two_confounder(const TwoConfounderParams& p = {}) {
    ScenarioSpec sc;
    sc.kind = ScenarioKind::survival;
    sc.K = 6;
    sc.baseline = {
        {"B", dist1(DistFamily::exponential, lpc(2.0), "baseline B")},
        {"C", dist1(DistFamily::bernoulli, lpc(0.7), "baseline C")}};
    sc.baseline_order = {{false, 0}, {false, 1}};

    CovariateProcess L;
    L.name = "L";
    L.dists.resize(sc.K + 1);
    L.dists[0] =
        dist2(DistFamily::gamma,
              lin(1.0, {{0.5, {bref(0, "B")}}, {0.5, {bref(1, "C")}}}), lpc(1.0),
              "covariate L");
    for (int k = 1; k <= sc.K; ++k)
        L.dists[k] = dist2(DistFamily::gamma,
                           lin(1.0,
                               {{0.5, {bref(0, "B")}},
                                {0.5, {bref(1, "C")}},
                                {0.1, {cref(0, 1)}},
                                {-0.5, {tref(0, 1)}}}),
                           lpc(1.0), "covariate L");
    L.copulas = tri_copulas(sc.K, t_c(p.rhoL, 5.0));

    CovariateProcess W;
    W.name = "W";
    W.dists.resize(sc.K + 1);
    W.dists[0] = dist1(DistFamily::bernoulli,
                       lin(-0.2, {{0.5, {bref(0, "B")}}, {0.5, {bref(1, "C")}}},
                           Link::expit),
                       "covariate W");
    for (int k = 1; k <= sc.K; ++k)
        W.dists[k] = dist1(DistFamily::bernoulli,
                           lin(-0.2,
                               {{0.5, {bref(0, "B")}},
                                {0.5, {bref(1, "C")}},
                                {1.0, {cref(1, 1, "W")}},
                                {-0.6, {tref(0, 1)}}},
                               Link::expit),
                           "covariate W");
    W.copulas = tri_copulas(sc.K, gauss_c(p.rhoW));
    sc.covariates = {L, W};

    TreatmentProcess A;
    A.name = "A";
    A.dists.resize(sc.K + 1);
    for (int k = 0; k <= sc.K; ++k)
        A.dists[k] = dist1(DistFamily::bernoulli,
                           lin(-1.5,
                               {{0.5, {bref(0, "B")}},
                                {0.5, {bref(1, "C")}},
                                {0.5, {cref(0)}},
                                {0.5, {cref(1, 0, "W")}}},
                               Link::expit),
                           "treatment A");
    sc.treatments = {A};

    sc.survival_msm.form = HazardForm::cox_constant;
    sc.survival_msm.lambda0 = p.lambda0;
    sc.survival_msm.g = lin(0.0, {{p.betaC, {bref(1, "C")}},
                                  {p.betaA, {tref(0)}},
                                  {p.betaCA, {bref(1, "C"), tref(0)}}});
    sc.validate();
    return sc;
}

// Fixed-draw source for deterministic engine checks: every address yields
// `fallback` unless overridden.
struct FixedDraws {
    double fallback = 0.5;
    std::map<std::pair<int, int>, double> values;

    double at(int step, int slot) const {
        auto it = values.find({step, slot});
        return it == values.end() ? fallback : it->second;
    }
};

} // namespace ts

#endif
