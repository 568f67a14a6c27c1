#pragma once

#include "bls/matrix.hpp"

#include <cstdint>
#include <random>

namespace bls {

// Seedable, portable generator: mt19937_64 with explicit bit-to-double
// mappings (std::uniform_real_distribution is not pinned by the standard,
// so it is avoided). Matrices are filled in column-major order; the draw
// stream is part of the reproducibility contract.
class UniformRng {
public:
    explicit UniformRng(std::uint64_t seed) : engine_(seed) {}

    // [0, 1), 53-bit resolution.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on [-1, 1].
    double symmetric() { return 2.0 * unit() - 1.0; }

    // Standard normal via Box-Muller (cached second value).
    double gaussian();

    Matrix uniform_matrix(Index rows, Index cols);
    Matrix gaussian_matrix(Index rows, Index cols);

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bls
