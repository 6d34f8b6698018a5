// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nqn/types.hpp"

namespace nqn {

/// Componentwise clamp of x onto [lower, upper]. Clamped coordinates receive
/// the bound value bit-exactly, so downstream tightness tests can compare
/// with ==.
Vector project(const Vector& x, const Bounds& b);

/// Feasible-direction operator. For feasible x,
///   [T(x,p)]_i = p_i          if lower_i < x_i < upper_i,
///   [T(x,p)]_i = max(p_i, 0)  if x_i = lower_i,
///   [T(x,p)]_i = min(p_i, 0)  if x_i = upper_i,
/// i.e. components that would instantly leave the box are zeroed. A
/// coordinate pinned by lower_i = upper_i admits no motion, so both clamps
/// apply and the component is always zeroed.
Vector t_operator(const Vector& x, const Vector& p, const Bounds& b);

/// Coordinates sitting at a bound whose gradient sign keeps them there:
/// {i : x_i = lower_i and g_i >= 0} tagged Lower, union
/// {i : x_i = upper_i and g_i <= 0} tagged Upper. Comparisons are non-strict,
/// so g_i = 0 at a bound is binding. A coordinate with lower_i = upper_i is
/// always a member (tagged Lower when both clauses apply).
ActiveSet binding_set(const Vector& x, const Vector& g, const Bounds& b);

/// All coordinates sitting at a bound, regardless of gradient sign. Tags give
/// the bound the coordinate sits at (Lower wins when lower_i = upper_i).
ActiveSet tight_set(const Vector& x, const Bounds& b);

/// First-order stationarity residual T(x, -g). Zero exactly when x satisfies
/// the projected first-order conditions: g_i = 0 on free coordinates, g_i >= 0
/// at a lower bound, g_i <= 0 at an upper bound.
Vector stationarity_residual(const Vector& x, const Vector& g, const Bounds& b);

}  // namespace nqn
