#pragma once

// Exact-arithmetic sampling of the sign claims on admissible states.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cmaeig/algebra/poly.hpp"

namespace cmaeig::algebra {

struct AdmissibleSample {
    RegimeTag regime = RegimeTag::R3;
    Point point;  // lam already set to its induced value
    std::string describe() const;
};

// Draws candidate `index` of the stream `seed`: v_i = num/den with den in
// 1..8 and |v_i| <= 2, free d_i in [1/4, 4]. Not necessarily admissible.
AdmissibleSample draw_candidate(RegimeTag regime, std::uint64_t seed, std::uint64_t index);

// Builds a sample from explicit values; d3 is ignored under R2.
AdmissibleSample make_sample(RegimeTag regime, const std::array<mpq_class, 4>& v, const std::array<mpq_class, 3>& d);

bool is_admissible(const AdmissibleSample& s);

struct MinorValues {
    mpq_class F11, F22;
    mpq_class P1_A1, P2_A1, P1_A2, P2_A2, P3_A2;
    std::array<mpq_class, 5> reduced_leading;  // leading minors of the block reduced matrix
    bool offblock_zero = true;
};

// Exact evaluation of the table A at an R3 sample, reduced numerically by the
// same two congruence operations.
MinorValues evaluate_minors(const AdmissibleSample& s);

struct Violation {
    std::string quantity;
    std::string sample;
    std::string value;
};

struct PositivityReport {
    int requested = 0;
    int accepted = 0;
    int rejected = 0;
    int accepted_r2 = 0;
    int rejected_r2 = 0;
    std::vector<std::string> quantities;
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// count accepted R3 samples plus count accepted R2 samples.
PositivityReport positivity_sample_suite(int count, std::uint64_t seed);

}  // namespace cmaeig::algebra
