#pragma once

// Catalog of exact identities behind the constant rank argument: the
// coefficient matrix F^{ij} at a diagonal Hessian, the third-derivative
// quadratic forms for minimal rank 2 and 3, the coefficient table A, its
// congruence block reduction and the minors of the two blocks.
//
// Every check is exact. "Under R2/R3" means the difference reduces to the
// zero polynomial after the regime substitution.

#include <string>
#include <vector>

#include "cmaeig/algebra/poly.hpp"
#include "cmaeig/algebra/ratexpr.hpp"

namespace cmaeig::algebra {

struct FExprs {
    PolyExpr F11, F22, F33, F12, F23;
    PolyExpr s1;  // v1^2 + v3^2
    PolyExpr s2;  // v2^2 + v4^2
    // Full 4x4 coefficient matrix at a diagonal Hessian, 1-based.
    PolyExpr F(int i, int j) const;
};

FExprs fexprs();

// Deliberate corruptions used to show that the checks can fail.
enum class Mutation {
    none,
    flip_F12,            // displayed rank-2 forms use -F12
    drop_v124_constant,  // raw v124^2 coefficient loses its -1
    F33_as_F22,          // product identity written with F22 in place of F33
};

Mutation parse_mutation(const std::string& name);  // throws InvalidArgument
std::string mutation_name(Mutation m);

struct CheckResult {
    std::string tag;
    std::string group;
    std::string description;
    std::string regime;  // "exact", "R2" or "R3"
    bool passed = false;
    std::string detail;
};

struct StepOutcome {
    bool ok = true;
    std::string failing;  // tag of the first failing check
    std::vector<CheckResult> checks;
};

std::vector<CheckResult> verify_fexprs();
StepOutcome verify_claim1_quadratic(Mutation m = Mutation::none);

// Variable order (v114, v334, v134, v124, v234).
RatMatrix build_matrix_A();
// Half of the rank-3 form after eliminating v224, built from the second
// partials of F and the coefficient matrix, in the same variable order.
RatMatrix raw_rank3_form();
StepOutcome verify_coefficient_bullets(Mutation m = Mutation::none);

// S such that A' = S^T A S is the block reduced matrix.
RatMatrix block_reduction_transform();
RatMatrix matrix_A1();
RatMatrix matrix_A2();
StepOutcome verify_block_reduction();

StepOutcome verify_claim2();
StepOutcome verify_claim3(Mutation m = Mutation::none);

// Every check in catalog order.
std::vector<CheckResult> run_identity_catalog(Mutation m = Mutation::none);

}  // namespace cmaeig::algebra
