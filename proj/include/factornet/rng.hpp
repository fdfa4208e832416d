#pragma once

#include <cstdint>
#include <random>

namespace factornet {

/// Deterministic random source. The engine is std::mt19937_64, whose output sequence is fixed by
/// the standard; every transform below is implemented here (not via <random> distributions) so
/// draws are identical across standard libraries and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Independent stream for replicate `index` of a run seeded with `seed`.
    static Rng stream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform();

    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n);

    double normal();

    /// Laplace with unit variance.
    double laplace();

    /// Student t with `df` degrees of freedom, rescaled to unit variance (df > 2).
    double student_t(double df);

    /// Gamma(shape, 1).
    double gamma(double shape);

private:
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace factornet
