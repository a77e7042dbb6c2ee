#pragma once

// Shared numeric aliases, deterministic RNG utilities and error helpers.

#include <Eigen/Dense>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>

namespace priormc {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Thrown when an operation receives arguments outside its domain.
struct InvalidInput : std::invalid_argument {
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when a linear system has too few observations to pin down the unknowns.
struct Underdetermined : std::runtime_error {
    explicit Underdetermined(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when leverage scores vanish and reweighted norms become undefined.
struct DegenerateScore : std::runtime_error {
    explicit DegenerateScore(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidInput(msg);
}

/// SplitMix64 step; used both as a stream-derivation hash and a seeder.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from a master seed and a path of indices,
/// so that e.g. (trial, algorithm, grid cell) each get reproducible randomness.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = master;
    for (std::uint64_t id : path) {
        s ^= 0x2545f4914f6cdd1dULL + id;
        (void)splitmix64(s);
        s = splitmix64(s);
    }
    return s;
}

/// Deterministic random stream: mt19937_64 engine with hand-rolled uniform and
/// Gaussian draws (the standard distributions are implementation-defined, which
/// would break byte-identical reproducibility across library versions).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform draw in [0, 1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal draw via Box-Muller (pairs cached).
    double gaussian() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = 0.0;
        do { u1 = uniform01(); } while (u1 <= 0.0);
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    /// n1 x n2 matrix of i.i.d. standard normals.
    Mat gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
        Mat out(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = gaussian();
        return out;
    }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace priormc
