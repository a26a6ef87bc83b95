#include "pbvp/certify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pbvp/solver.hpp"

namespace pbvp {

namespace {

GridFunction constant_on(int n, double v) {
    GridFunction g;
    g.n = n;
    g.periodic = true;
    g.values.assign(n + 1, v);
    return g;
}

GridFunction band_mid(const Bracket& br) {
    GridFunction g;
    g.n = br.alpha.n;
    g.periodic = true;
    g.values.resize(g.n + 1);
    g.derivative.resize(g.n + 1);
    for (int i = 0; i <= g.n; ++i) {
        g.values[i] = 0.5 * (br.alpha.values[i] + br.beta.values[i]);
        g.derivative[i] = 0.5 * (br.alpha.derivative[i] + br.beta.derivative[i]);
    }
    return g;
}

}  // namespace

Certificate certify_problem(const BuiltProblem& built, const CertifyOptions& opt) {
    const ProblemDef& prob = built.prob;
    const Bracket& br = built.bracket;
    if (br.alpha.values.empty())
        throw std::invalid_argument("certify: instance carries no lower/upper pair");

    Certificate cert;
    const double delta = opt.delta.value_or(built.delta);
    const double Delta = opt.Delta.value_or(built.Delta);
    cert.params["delta"] = delta;
    cert.params["Delta"] = Delta;
    cert.params["samples"] = opt.samples;
    cert.params["seed"] = opt.seed;

    cert.records.push_back(check_lower(prob, br.alpha));
    cert.records.push_back(check_upper(prob, br.beta));

    if (built.family == "duffing") {
        const int n = br.alpha.n;
        const double mu = default_mu(br);
        const E2Result e2 = estimate_E2(prob, br, mu);
        cert.params["mu"] = mu;
        cert.params["ell"] = e2.ell;
        cert.records.push_back(e2.record);

        const GridFunction cgrid = constant_on(n, built.growth_c);
        const int variant = built.growth_variant == 2 ? 2 : 1;
        cert.records.push_back(check_growth_condition(prob, br, cgrid, variant));

        const GrowthLK lk = growth_LK(prob, br, cgrid);
        double gap = 0;
        for (int i = 0; i <= n; ++i)
            gap = std::max(gap, br.beta.values[i] - br.alpha.values[i]);
        const double c_att = built.growth_c * gap;
        const double zmax = default_zmax(br, lk.L, c_att);
        cert.params["L"] = lk.L;
        cert.params["K"] = lk.K;
        cert.params["z_max"] = zmax;
        cert.records.push_back(variant == 2
                                   ? verify_E3prime(prob, br, cgrid, lk.L, lk.K, zmax)
                                   : verify_E3(prob, br, cgrid, lk.L, lk.K, zmax));

        // The constructive shift the growth route guarantees; advisory for
        // solvers, so a failed selection only omits the params.
        try {
            HypoSummary hypo;
            hypo.ell = e2.ell;
            hypo.mu = mu;
            hypo.c = c_att;
            hypo.L = lk.L;
            hypo.Khat = compute_Khat(prob, br, lk.K);
            const ShiftChoice sc = pick_shift(prob, br, hypo);
            cert.params["a"] = sc.a;
            cert.params["b"] = sc.b;
            cert.params["N"] = sc.N;
        } catch (const std::exception&) {
        }
        return cert;
    }

    double a, b;
    if (opt.a) {
        a = *opt.a;
        b = opt.b.value_or(0.0);
    } else if (built.has_shift) {
        a = built.shift_a;
        b = built.shift_b;
    } else {
        const LinearParams guess = default_shift(prob, band_mid(br));
        a = guess.a;
        b = guess.b;
    }
    const LinearParams lp = make_params(a, b);
    cert.params["a"] = a;
    cert.params["b"] = b;
    cert.params["k0"] = lp.k0;

    cert.records.push_back(verify_E0(prob, br, lp, delta));
    const Envelope env = build_envelope(br, lp, Delta, delta);
    const std::vector<GridFunction> members = sample_envelope(env, opt.samples, opt.seed);
    cert.records.push_back(built.family == "singular"
                               ? verify_E1prime(prob, br, lp, Delta, members)
                               : verify_E1(prob, br, lp, Delta, members));
    return cert;
}

}  // namespace pbvp
