#include "priormc/experiments.hpp"

#include "priormc/theory.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>

namespace priormc {

namespace {

SubspaceBasis haar_basis(Rng& rng, int n, int r, double spike = 1.0) {
    Mat G = rng.gaussian_matrix(n, r);
    if (spike != 1.0) G.row(0) *= spike;
    Eigen::HouseholderQR<Mat> qr(G);
    Mat Q = qr.householderQ() * Mat::Identity(n, r);
    return SubspaceBasis(std::move(Q));
}

}  // namespace

Instance generate_instance(const InstanceSpec& spec, std::uint64_t seed) {
    require(spec.r >= 1 && 2 * spec.r <= spec.n, "generate_instance: need 1 <= r <= n/2");
    require(spec.sigma2 >= 0.0, "generate_instance: negative noise variance");
    Rng rng(seed);
    Instance inst;
    inst.U = haar_basis(rng, spec.n, spec.r, spec.coherent ? spec.spike_strength : 1.0);
    inst.V = haar_basis(rng, spec.n, spec.r);
    inst.M = inst.U.basis * inst.V.basis.transpose();
    inst.M /= inst.M.norm();
    if (spec.sigma2 > 0.0) {
        const double sigma = std::sqrt(spec.sigma2);
        inst.M_prime = inst.M + sigma * rng.gaussian_matrix(spec.n, spec.n);
        const SvdFactors f = svd(inst.M_prime);
        inst.Ut = SubspaceBasis(f.U.basis.leftCols(spec.r));
        inst.Vt = SubspaceBasis(f.V.basis.leftCols(spec.r));
    } else {
        inst.M_prime = inst.M;
        inst.Ut = inst.U;
        inst.Vt = inst.V;
    }
    inst.u_angle = principal_angles(inst.U, inst.Ut)(0);
    inst.v_angle = principal_angles(inst.V, inst.Vt)(0);
    return inst;
}

std::string algo_name(const AlgoSpec& a) {
    switch (a.kind) {
        case AlgoKind::Standard: return "standard";
        case AlgoKind::Weighted: return "weighted";
        case AlgoKind::Diagonal: return "diagonal";
        case AlgoKind::WLS: return "wls";
        case AlgoKind::RNNH: return "rnnh";
        case AlgoKind::IRW: return "irw" + std::to_string(a.iterations);
        case AlgoKind::IRNN: return "irnn" + std::to_string(a.iterations);
        case AlgoKind::OracleLS: return "oracle_ls";
    }
    return "unknown";
}

std::string algo_param_name(const AlgoSpec& a) {
    switch (a.kind) {
        case AlgoKind::Weighted:
        case AlgoKind::IRW: return "w";
        case AlgoKind::WLS: return "gamma";
        case AlgoKind::RNNH:
        case AlgoKind::IRNN: return "delta";
        default: return "none";
    }
}

namespace {

TrialRecord run_single_trial(const SweepConfig& cfg, const AlgoSpec& alg, int grid_index,
                             int trial) {
    const double gval = cfg.grid[grid_index];
    const std::uint64_t inst_seed =
        derive_seed(cfg.master_seed, {0xA11u, cfg.fixed_instance ? 0u : static_cast<std::uint64_t>(trial)});
    const std::uint64_t data_seed = derive_seed(
        cfg.master_seed, {0xB22u, static_cast<std::uint64_t>(grid_index), static_cast<std::uint64_t>(trial)});

    TrialRecord rec;
    rec.algorithm = algo_name(alg);
    rec.param_name = algo_param_name(alg);
    rec.param_value = alg.param;
    rec.n = cfg.instance.n;
    rec.r = cfg.instance.r;
    rec.sigma2 = cfg.instance.sigma2;
    rec.trial = trial;
    rec.seed = data_seed;

    const Instance inst = generate_instance(cfg.instance, inst_seed);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        SolveResult res;
        if (cfg.recovery) {
            const int m = std::max(1, static_cast<int>(std::lround(gval * cfg.instance.n * cfg.instance.n)));
            rec.p_or_m = m;
            const GaussianEnsemble ens = make_gaussian_ensemble(m, cfg.instance.n, data_seed);
            const Vec y = gaussian_measure(inst.M, ens);
            switch (alg.kind) {
                case AlgoKind::Standard:
                    res = solve_standard_recovery(y, ens, cfg.solver, &inst.M);
                    break;
                case AlgoKind::Weighted:
                    res = solve_weighted_recovery(y, ens, make_weight(inst.Ut, alg.param),
                                                  make_weight(inst.Vt, alg.param), cfg.solver,
                                                  &inst.M);
                    break;
                case AlgoKind::WLS: {
                    // Recovery analog of the least-squares baseline: minimize the
                    // reweighted Frobenius energy subject to the measurements.
                    const int n = cfg.instance.n;
                    const Mat WL = (inst.M_prime * inst.M_prime.transpose() +
                                    alg.param * Mat::Identity(n, n));
                    const Mat WR = (inst.M_prime.transpose() * inst.M_prime +
                                    alg.param * Mat::Identity(n, n));
                    // Substituted variable X' = WL^{-1/2} X WR^{-1/2} with the
                    // inverse-Gram weights: its minimum Frobenius-norm feasible
                    // point is the constraint projection of zero, which a single
                    // engine step with an inert proximal stage returns directly.
                    Eigen::SelfAdjointEigenSolver<Mat> el(WL), er(WR);
                    SolverConfig one = cfg.solver;
                    one.max_iters = 1;
                    one.penalty = 1e-12;  // makes the soft-threshold step a no-op
                    res = solve_recovery_general(y, ens, el.operatorInverseSqrt(),
                                                 el.operatorSqrt(), er.operatorInverseSqrt(),
                                                 er.operatorSqrt(), one, &inst.M);
                    res.converged = true;
                    break;
                }
                case AlgoKind::RNNH: {
                    const int n = cfg.instance.n;
                    Eigen::SelfAdjointEigenSolver<Mat> el(
                        inst.M_prime * inst.M_prime.transpose() +
                        alg.param * alg.param * Mat::Identity(n, n));
                    Eigen::SelfAdjointEigenSolver<Mat> er(
                        inst.M_prime.transpose() * inst.M_prime +
                        alg.param * alg.param * Mat::Identity(n, n));
                    const Mat W1 = el.operatorInverseSqrt();
                    const Mat W2 = er.operatorInverseSqrt();
                    res = solve_recovery_general(y, ens, W1, el.operatorSqrt(), W2,
                                                 er.operatorSqrt(), cfg.solver, &inst.M);
                    break;
                }
                default:
                    throw InvalidInput("run_sweep: algorithm not available in recovery mode");
            }
        } else {
            rec.p_or_m = gval;
            const SamplingMask mask = uniform_mask(cfg.instance.n, gval, data_seed);
            const Mat Y = apply_Rp(inst.M, mask);
            switch (alg.kind) {
                case AlgoKind::Standard:
                    res = solve_standard_completion(Y, mask, cfg.solver, &inst.M);
                    break;
                case AlgoKind::Weighted:
                    res = solve_weighted_completion(Y, mask, make_weight(inst.Ut, alg.param),
                                                    make_weight(inst.Vt, alg.param),
                                                    cfg.solver, &inst.M);
                    break;
                case AlgoKind::Diagonal:
                    res = baseline_diagonal(Y, mask, leverage_scores(inst.Ut, inst.Vt),
                                            cfg.solver, &inst.M);
                    break;
                case AlgoKind::WLS:
                    res = baseline_wls(Y, mask, inst.M_prime, alg.param, cfg.solver, &inst.M);
                    break;
                case AlgoKind::RNNH:
                    res = baseline_rnnh(Y, mask, inst.M_prime, alg.param, cfg.solver, &inst.M);
                    break;
                case AlgoKind::IRW:
                    res = iterative_reweighted(Y, mask, ReweightVariant::IRW, alg.iterations,
                                               cfg.instance.r, alg.param, cfg.solver, &inst.M);
                    break;
                case AlgoKind::IRNN:
                    res = iterative_reweighted(Y, mask, ReweightVariant::IRNN, alg.iterations,
                                               cfg.instance.r, alg.param, cfg.solver, &inst.M);
                    break;
                case AlgoKind::OracleLS:
                    res = perfect_prior_least_squares(Y, mask, inst.U, inst.V, &inst.M);
                    break;
            }
        }
        rec.rel_error = res.relative_error;
        rec.iterations = res.iterations;
    } catch (const std::exception&) {
        rec.rel_error = std::numeric_limits<double>::infinity();
        rec.iterations = 0;
    }
    if (cfg.measure_time) {
        const auto t1 = std::chrono::steady_clock::now();
        rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    rec.success = (rec.rel_error <= 1e-3);
    return rec;
}

}  // namespace

std::vector<TrialRecord> run_sweep(const SweepConfig& cfg) {
    require(!cfg.algorithms.empty(), "run_sweep: empty algorithm list");
    require(!cfg.grid.empty(), "run_sweep: empty grid");
    require(cfg.trials >= 1, "run_sweep: need at least one trial");

    struct Job {
        int alg, grid, trial;
    };
    std::vector<Job> jobs;
    for (int a = 0; a < static_cast<int>(cfg.algorithms.size()); ++a)
        for (int g = 0; g < static_cast<int>(cfg.grid.size()); ++g)
            for (int t = 0; t < cfg.trials; ++t) jobs.push_back({a, g, t});

    std::vector<TrialRecord> records(jobs.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t k = next.fetch_add(1);
            if (k >= jobs.size()) return;
            const Job& job = jobs[k];
            records[k] = run_single_trial(cfg, cfg.algorithms[job.alg], job.grid, job.trial);
        }
    };
    const int threads = std::max(1, cfg.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return records;
}

std::vector<CurvePoint> success_curve(const std::vector<TrialRecord>& records) {
    require(!records.empty(), "success_curve: empty record table");
    std::map<std::tuple<std::string, double, double>, std::pair<int, int>> groups;
    std::map<std::tuple<std::string, double, double>, std::string> pnames;
    for (const TrialRecord& rec : records) {
        const auto key = std::make_tuple(rec.algorithm, rec.param_value, rec.p_or_m);
        auto& [succ, tot] = groups[key];
        succ += rec.success ? 1 : 0;
        tot += 1;
        pnames[key] = rec.param_name;
    }
    std::vector<CurvePoint> out;
    const double z = 1.959963984540054;  // 97.5% normal quantile
    for (const auto& [key, counts] : groups) {
        const auto& [succ, tot] = counts;
        CurvePoint pt;
        pt.algorithm = std::get<0>(key);
        pt.param_value = std::get<1>(key);
        pt.p_or_m = std::get<2>(key);
        pt.param_name = pnames[key];
        pt.trials = tot;
        const double s = succ, t = tot;
        pt.rate = s / t;
        const double denom = t + z * z;
        const double center = (s + z * z / 2.0) / denom;
        const double half = z * std::sqrt(s * (t - s) / t + z * z / 4.0) / denom;
        pt.lo = std::max(0.0, center - half);
        pt.hi = std::min(1.0, center + half);
        out.push_back(std::move(pt));
    }
    return out;
}

std::vector<CertifyRecord> run_certificate_campaign(const CertifyConfig& cfg) {
    require(cfg.seeds >= 1, "run_certificate_campaign: need at least one seed");
    std::vector<CertifyRecord> out;
    out.reserve(cfg.seeds);
    for (int s = 0; s < cfg.seeds; ++s) {
        const std::uint64_t seed = derive_seed(cfg.master_seed, {0xCE47u, static_cast<std::uint64_t>(s)});
        InstanceSpec ispec;
        ispec.n = cfg.n;
        ispec.r = cfg.r;
        ispec.sigma2 = cfg.sigma2;
        const Instance inst = generate_instance(ispec, seed);

        const CanonicalFrame FL = canonical_decomposition(inst.U, inst.Ut, cfg.weight);
        const CanonicalFrame FR = canonical_decomposition(inst.V, inst.Vt, cfg.weight);
        const PriorQuality q{inst.u_angle, inst.v_angle, cfg.weight, cfg.weight};
        const TheoryConstants tc = constants(q);
        const int K = default_batch_count(tc.c4, cfg.n);

        // Uniform-score sampling probability, clamped like the leveraged mask.
        const double p = std::clamp(
            cfg.multiplier * 2.0 * cfg.r * std::log(static_cast<double>(cfg.n)) / cfg.n, 1e-6,
            1.0);
        const Mat target_p = Mat::Constant(cfg.n, cfg.n, p);
        const GolfingPlan plan = make_golfing_plan(target_p, K, derive_seed(seed, {0x901fu}));

        CertifyRecord rec;
        rec.seed = seed;
        rec.n = cfg.n;
        rec.r = cfg.r;
        rec.p = p;
        rec.K = K;
        try {
            const Mat Sbar = sign_matrix(FL, FR, inst.M);
            const Mat Sp = build_S_prime(FL, FR, Sbar);
            const auto [Lambda, report] = construct_certificate(Sp, plan, FL, FR);
            rec.residual_frob = report.residual_frob;
            rec.offsupport_spec = report.offsupport_spec;
            rec.support_violation = report.support_violation;
            rec.passed = report.pass_residual && report.pass_spectral && report.pass_support;
            rec.decay_ok = true;
            for (size_t k = 1; k < report.decay_trace.size(); ++k)
                if (report.decay_trace[k] > 0.5 * report.decay_trace[k - 1] + 1e-12)
                    rec.decay_ok = false;
        } catch (const std::exception&) {
            rec.passed = false;
            rec.decay_ok = false;
        }
        const SamplingMask iso_mask =
            uniform_mask(cfg.n, p, derive_seed(seed, {0x150bu}));
        const SupportProjector T{inst.U, inst.V};
        rec.isometry = isometry_deviation_on_T(T, iso_mask);
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace priormc
