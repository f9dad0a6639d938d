#pragma once
#include <functional>
#include <string>

#include "sunfact/model.hpp"

namespace sunfact {

// One-parameter model families used by sweeps. Path syntax:
//   scale:V | scale:W | scale:U | scale:epsilon   (entrywise t * base)
//   lerp:band_vw | lerp:band_w | lerp:heisenberg_eps   (named recipes)
std::function<ModelSpec(double)> make_family(const ModelSpec& base,
                                             const std::string& path);

// n = 3 ladder eps = (-1/2, 0, 1/2), U = 0, V_ij = t*v_c,
// W_ij = t*(eps_i + eps_j - E_2c), v_c = 2/5; t is v/v_c.
ModelSpec band_vw_spec(double t, int N,
                       GraphKind graph = GraphKind::ring_first_neighbor);
double band_vw_E2c();

// V = 0 family: eps = (-1, 0, 0.8[, 2.2]), U_ii = t*(2 eps_i + 5),
// W_ij = t*(eps_i + eps_j + 5); t is w/w_c, pair energy -5 at t = 1.
ModelSpec band_w_spec(double t, int n, int N,
                      GraphKind graph = GraphKind::ring_first_neighbor);

// W_ij = U_ii = J = 1 with eps_i = t*(-1, 0, 0.8, 2.2); SU(4) point at t = 0.
ModelSpec heisenberg_eps_spec(double t, int N = 4,
                              GraphKind graph = GraphKind::ring_first_neighbor);

}  // namespace sunfact
