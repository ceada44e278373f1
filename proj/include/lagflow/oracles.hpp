#pragma once

// Slow reference implementations used to cross-check the production code
// paths. They share no code with tensoralg.cpp or geometry.cpp.

#include "lagflow/geometry.hpp"
#include "lagflow/tensoralg.hpp"

namespace lagflow::oracle {

/// Full index-loop contractions over all 2^6 index combinations.
Norms naive_norms(const SymTensor3& h, double g11, double g12, double g22);

/// Raw h_ijk = <II_ij, J'F_k> where II is built from a Gram-Schmidt
/// orthonormal frame of the normal plane.
RawSecondFundamentalForm frame_second_fundamental_form(const Mat2& df, const DisplacementHessian& d2u);

/// The equality case h_ijk = (H_i g_jk + H_j g_ik + H_k g_ij) / 4 for a given
/// covector H, which saturates |H|^2 <= (4/3)|A|^2.
SymTensor3 equality_tensor(const Vec2& H, double g11, double g12, double g22);

/// h_ijk = v_i v_j v_k, for which the Cauchy-Schwarz bound
/// sum (H^k h_kij)^2 <= |H|^2 |A|^2 is an equality.
SymTensor3 rank_one_tensor(const Vec2& v);

}  // namespace lagflow::oracle
