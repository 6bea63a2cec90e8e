#pragma once

#include "ainfty/coeff.hpp"

#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

namespace testing_support {

inline std::uint64_t seed() {
    if (const char* s = std::getenv("AINFTY_SEED")) return std::stoull(s);
    return 20240611ULL;
}

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t s = seed()) : rng(s) {}
    long range(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng); }
    ainfty::Elem elem(const ainfty::Ring& r, long lo = -3, long hi = 3) { return ainfty::Elem(r, range(lo, hi)); }
    ainfty::SparseMatrix matrix(const ainfty::Ring& r, int rows, int cols, double density = 0.5, long lo = -3,
                                long hi = 3) {
        ainfty::SparseMatrix m(r, rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (coin(density)) m.set(i, j, elem(r, lo, hi));
        return m;
    }
};

}  // namespace testing_support
