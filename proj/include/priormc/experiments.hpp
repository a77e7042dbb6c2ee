#pragma once

// Instance generation, phase-transition sweeps over sampling rates or
// measurement budgets, success statistics with binomial intervals, and the
// certificate verification campaign.

#include "priormc/core.hpp"
#include "priormc/certificate.hpp"
#include "priormc/solvers.hpp"

#include <optional>
#include <string>
#include <vector>

namespace priormc {

struct InstanceSpec {
    int n = 20;
    int r = 4;
    double sigma2 = 1e-4;        ///< variance of the prior perturbation
    bool coherent = false;       ///< spike one row before orthogonalization
    double spike_strength = 4.0; ///< generator row scaling for coherent instances
};

struct Instance {
    Mat M;            ///< unit Frobenius norm ground truth, rank r
    SubspaceBasis U, V;    ///< true column/row bases
    SubspaceBasis Ut, Vt;  ///< prior bases (leading subspaces of M_prime)
    Mat M_prime;           ///< noisy prior matrix estimate
    double u_angle = 0.0;  ///< largest left principal angle
    double v_angle = 0.0;  ///< largest right principal angle
};

Instance generate_instance(const InstanceSpec& spec, std::uint64_t seed);

enum class AlgoKind { Standard, Weighted, Diagonal, WLS, RNNH, IRW, IRNN, OracleLS };

struct AlgoSpec {
    AlgoKind kind = AlgoKind::Standard;
    double param = 0.0;  ///< w (Weighted/IRW), gamma (WLS), delta (RNNH/IRNN)
    int iterations = 1;  ///< reweighting rounds for IRW/IRNN
};

std::string algo_name(const AlgoSpec& a);
std::string algo_param_name(const AlgoSpec& a);

struct TrialRecord {
    std::string algorithm;
    std::string param_name;
    double param_value = 0.0;
    int n = 0, r = 0;
    double sigma2 = 0.0;
    double p_or_m = 0.0;  ///< sampling probability, or measurement count for recovery
    int trial = 0;
    std::uint64_t seed = 0;
    double rel_error = 0.0;
    bool success = false;
    int iterations = 0;
    double wall_ms = 0.0;
};

struct SweepConfig {
    InstanceSpec instance;
    std::vector<AlgoSpec> algorithms;
    std::vector<double> grid;  ///< sampling probabilities (completion) or fractions of n^2 (recovery)
    int trials = 50;
    std::uint64_t master_seed = 1;
    bool recovery = false;        ///< Gaussian measurements instead of entry sampling
    bool fixed_instance = false;  ///< one instance for all trials instead of fresh draws
    bool measure_time = false;    ///< record wall time (off by default for reproducible output)
    int threads = 1;
    SolverConfig solver;
};

/// Runs the full (algorithm x grid x trial) table. Fully deterministic given
/// the master seed; records appear in (algorithm, grid, trial) order.
std::vector<TrialRecord> run_sweep(const SweepConfig& cfg);

struct CurvePoint {
    std::string algorithm;
    std::string param_name;
    double param_value = 0.0;
    double p_or_m = 0.0;
    double rate = 0.0;
    double lo = 0.0, hi = 0.0;  ///< Wilson 95% interval
    int trials = 0;
};

std::vector<CurvePoint> success_curve(const std::vector<TrialRecord>& records);

// --- certificate campaign -----------------------------------------------------

struct CertifyConfig {
    int n = 80;
    int r = 2;
    double sigma2 = 1e-4;
    double weight = 0.5;
    double multiplier = 4.0;  ///< sampling-probability multiplier (see leveraged_mask)
    int seeds = 20;
    std::uint64_t master_seed = 1;
};

struct CertifyRecord {
    std::uint64_t seed = 0;
    int n = 0, r = 0;
    double p = 0.0;
    int K = 0;
    double residual_frob = 0.0;
    double offsupport_spec = 0.0;
    double support_violation = 0.0;
    bool decay_ok = false;   ///< every golfing step at least halved the residual
    bool passed = false;     ///< all three certificate conditions
    double isometry = 0.0;   ///< power-method estimate on a fresh mask
};

std::vector<CertifyRecord> run_certificate_campaign(const CertifyConfig& cfg);

}  // namespace priormc
