#pragma once

#include <string>
#include <vector>

#include "qgraph/algebras.hpp"

namespace qgraph {

// phi(b) = sum_i v_i^* b v_i from B (on K) to A (on H). Each v_i is dimK x dimH.
struct KrausMap {
    Index dim_h = 0;
    Index dim_k = 0;
    std::vector<CMatrix> kraus;
    MatSubspace domain_algebra;   // B on K
    MatSubspace codomain_algebra; // A on H
};

struct Check {
    std::string name;
    bool passed;
    double residual;
};

struct CheckReport {
    std::vector<Check> checks;

    bool passed() const;
    void add(const std::string& name, bool ok, double residual) { checks.push_back({name, ok, residual}); }
    // Inclusion/equality style check: passes when residual <= bound.
    void add_bound(const std::string& name, double residual, double bound) { add(name, residual <= bound, residual); }
    const Check* find(const std::string& name) const;
};

// Wraps and validates the Kraus list; checks shapes only.
KrausMap make_kraus_map(std::vector<CMatrix> kraus, MatSubspace domain_algebra, MatSubspace codomain_algebra);

CheckReport validate_kraus(const KrausMap& phi);
CMatrix apply_ucp(const KrausMap& phi, const CMatrix& b);
CMatrix apply_dual(const KrausMap& phi, const CMatrix& a);

MatSubspace kraus_span(const KrausMap& phi);
MatSubspace kraus_space(const KrausMap& phi);

struct Faithfulness {
    bool faithful;
    Index support_dim;
    CMatrix support_projection; // onto [X_phi H], dimK x dimK
};
Faithfulness is_faithful(const KrausMap& phi);

struct PullbackResult {
    MatSubspace space;      // A'-bimodule closure
    double closure_defect;  // distance between the plain span and its closure
    bool closure_consistent;
};
PullbackResult pullback_detailed(const MatSubspace& t, const KrausMap& phi);
MatSubspace pullback(const QuantumGraph& t, const KrausMap& phi);
MatSubspace pullback(const MatSubspace& t, const KrausMap& phi);
MatSubspace pushforward(const QuantumGraph& s, const KrausMap& phi);
MatSubspace pushforward(const MatSubspace& s, const KrausMap& phi);

// S lives on H, T on K.
struct CohomReport {
    bool holds;
    double residual;
};
CohomReport cohomomorphism_report(const KrausMap& phi, const MatSubspace& s, const MatSubspace& t);
CohomReport strong_cohomomorphism_report(const KrausMap& phi, const MatSubspace& s, const MatSubspace& t);
bool is_cohomomorphism(const KrausMap& phi, const MatSubspace& s, const MatSubspace& t);
bool is_strong_cohomomorphism(const KrausMap& phi, const MatSubspace& s, const MatSubspace& t);

struct StarHomReport {
    bool multiplicative;
    bool adjoint_preserving;
    bool kraus_in_commutant; // v_i v_j^* in B' for all i, j
    double multiplicative_residual;
    double kraus_residual;
    bool consistent() const { return (multiplicative && adjoint_preserving) == kraus_in_commutant; }
    bool is_homomorphism() const { return multiplicative && adjoint_preserving; }
};
StarHomReport star_homomorphism_report(const KrausMap& phi);
bool is_star_homomorphism(const KrausMap& phi);

enum class PullbackVerdict { Pullback, FullPullback, No };
const char* verdict_name(PullbackVerdict v);

struct PullbackHomReport {
    PullbackVerdict verdict;
    double pullback_defect;   // S vs T^{<-theta}
    double pushforward_defect; // T vs S^{->theta}
    bool faithful;
};
// theta maps T's algebra (on K) into S's algebra (on H).
PullbackHomReport pullback_homomorphism_report(const KrausMap& theta, const QuantumGraph& t, const QuantumGraph& s);
PullbackVerdict is_pullback_homomorphism(const KrausMap& theta, const QuantumGraph& t, const QuantumGraph& s);

class TroSpace {
public:
    TroSpace() = default;
    const MatSubspace& space() const { return space_; }
    const MatSubspace& left() const { return left_; }   // [M M*] on K
    const MatSubspace& right() const { return right_; } // [M* M] on H

    static TroSpace trusted(MatSubspace m);

private:
    MatSubspace space_;
    MatSubspace left_;
    MatSubspace right_;
};

// Nondegeneracy residuals: 1 - dim([X H]) / dimK style counts are reported as
// missing dimensions.
struct Nondegeneracy {
    Index range_dim;  // dim [X H]
    Index corange_dim; // dim [X* K]
    bool ok;
};
Nondegeneracy nondegeneracy(const MatSubspace& x);

TroSpace tro_from_space(const MatSubspace& x);
// Checks the TRO axiom only, without requiring non-degeneracy.
double tro_axiom_defect(const MatSubspace& m);

CheckReport verify_tro_equivalence(const TroSpace& m, const MatSubspace& s, const MatSubspace& t);
CheckReport verify_tro_equivalence(const TroSpace& m, const QuantumGraph& s, const QuantumGraph& t);

struct BalancedTro {
    TroSpace tro;
    CheckReport report;
};
BalancedTro balance_tro(const TroSpace& m, const QuantumGraph& s, const QuantumGraph& t);

CheckReport verify_balanced_equivalence(const TroSpace& m, const QuantumGraph& s, const QuantumGraph& t);
// Kraus form: phi from B (T's algebra, on K) to A (S's algebra, on H).
CheckReport verify_balanced_equivalence(const KrausMap& phi, const QuantumGraph& s, const QuantumGraph& t);

} // namespace qgraph
