#pragma once

// Internal helpers shared between the complexity translation units.

#include "metricdiv/core.hpp"

namespace metricdiv::detail {

void check_alpha(double alpha);

/// log of the order-alpha diversity of a raw nonnegative vector p under z.
/// Entries <= kSupportTolerance are outside the support.
double log_diversity(const Vector& p, const Matrix& z, double alpha);

/// Euclidean projection onto the probability simplex.
Vector project_to_simplex(const Vector& v);

}  // namespace metricdiv::detail
