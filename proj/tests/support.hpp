#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace testsupport {

inline double rel_err(double a, double b) {
    return std::fabs(a - b) / std::max(std::fabs(b), 1.0);
}

struct Rng {
    explicit Rng(unsigned long long seed) : gen(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
    std::mt19937_64 gen;
};

}  // namespace testsupport
