#pragma once

#include <array>
#include <cstdint>

#include "gl3sup/h3geom.hpp"
#include "gl3sup/report.hpp"

namespace gl3sup {

/// Point of the closed positive Weyl chamber: a1 >= a2 >= a3, a1 + a2 + a3 = 0.
struct CartanVector {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
};

/// Singular values of m, descending, by one-sided Jacobi rotations (off-diagonal threshold 1e-14).
std::array<double, 3> singular_values(const RealMatrix3& m);

/// Logs of the singular values of m / |det m|^{1/3}. Throws SingularMatrix if det m == 0.
CartanVector cartan_project(const RealMatrix3& m);

/// Euclidean norm of (a1, a2, a3).
double cartan_norm(const CartanVector& c);

/// Random upper-triangular g with positive diagonal, det 1 and 0 < ||g - 1||_F <= radius.
/// Sample k depends only on (seed, k).
RealMatrix3 sample_near_identity(std::uint64_t seed, std::uint64_t k, double radius);

/// Ratios ||C(g)|| / ||g - 1|| and ||g^t g - 1|| / ||g - 1|| (Frobenius norms) over `samples` draws.
/// Passes when both ratios stay in [1/50, 50]. Throws DomainError unless samples >= 1 and 0 < radius <= 1.
VerificationReport verify_cartan_lemma(std::int64_t samples, double radius, std::uint64_t seed, unsigned threads = 1);

}  // namespace gl3sup
