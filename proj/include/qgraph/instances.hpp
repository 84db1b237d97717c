#pragma once

// Standard worked instances used by the regression corpus and the tests.

#include "qgraph/classical.hpp"
#include "qgraph/morita.hpp"

namespace qgraph::instances {

// P3<(2,1,3)>: a1a2, a1a3, a2a3, a3a4, a3a5, a3a6, a4a5, a4a6, a5a6 (0-based).
Graph blowup_p3_213();
// P3<(1,2,2)>: b1b2, b1b3, b2b3, b2b4, b2b5, b3b4, b3b5, b4b5.
Graph blowup_p3_122();
// Two disjoint edges a1a2, a3a4.
Graph two_disjoint_edges();
// b1b2, b1b3, b1b4, b3b4: a triangle with a pendant vertex.
Graph paw();

// span{I2, e12, e21} in M2.
MatSubspace path_system_m2(Tolerance tol = {});

// theta(x) = x (+) x from M2 to M4 with Kraus [I2 0], [0 I2].
struct Amplification {
    QuantumGraph small; // (span{I, e12, e21}, M2) on K = C^2
    QuantumGraph large; // its pullback on H = C^4 with algebra theta(M2)
    KrausMap theta;
};
Amplification doubling_amplification(Tolerance tol = {});

// S on (C^2 (x) C^2) (+) C^3 and T on (C^3 (x) C^2) (+) (C^2 (x) C^3), with
// multiplier blocks (2,2),(1,3) and (3,2),(2,3) over the same skeleton.
struct MixedBlockPair {
    QuantumGraph s;
    QuantumGraph t;
};
MixedBlockPair mixed_block_pair(Tolerance tol = {});

// Faithful ucp map D3 -> D3 with six scaled matrix-unit Kraus operators that is
// not a *-homomorphism.
KrausMap diagonal_ucp_counterexample(Tolerance tol = {});

} // namespace qgraph::instances
