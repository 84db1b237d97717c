#include "qgraph/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "qgraph/instances.hpp"
#include "qgraph/skeleton.hpp"

namespace qgraph::corpus {

namespace {

using namespace qgraph::instances;

Outcome pass(const std::string& detail = {}) { return {true, detail}; }
Outcome failure(const std::string& detail) { return {false, detail}; }
Outcome check(bool ok, const std::string& detail) { return {ok, detail}; }

std::string num(double x)
{
    std::ostringstream os;
    os << x;
    return os.str();
}

bool same_classes(const TwinPartition& p, std::vector<std::vector<int>> expected)
{
    auto got = p.classes;
    for (auto& c : got)
        std::sort(c.begin(), c.end());
    for (auto& c : expected)
        std::sort(c.begin(), c.end());
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    return got == expected;
}

KrausMap quotient_channel(const Graph& g) { return canonical_pullback_channel(skeleton_graph(g).second); }

Outcome p3_blowups_twins()
{
    auto p = true_twin_classes(blowup_p3_213());
    return check(same_classes(p, {{0, 1}, {2}, {3, 4, 5}}), "classes {a1,a2},{a3},{a4,a5,a6}");
}

Outcome p3_blowups_skeletons()
{
    auto g = skeleton_graph(blowup_p3_213()).first;
    auto h = skeleton_graph(blowup_p3_122()).first;
    bool ok = graph_isomorphism(g, path_graph(3)).has_value() && graph_isomorphism(h, path_graph(3)).has_value();
    return check(ok, "both skeletons are P3");
}

Outcome p3_blowups_blowups()
{
    bool g = graph_isomorphism(clique_blowup(path_graph(3), {2, 1, 3}), blowup_p3_213()).has_value();
    bool h = graph_isomorphism(clique_blowup(path_graph(3), {1, 2, 2}), blowup_p3_122()).has_value();
    return check(g && h, "P3<(2,1,3)> and P3<(1,2,2)> reproduce the pair");
}

Outcome p3_blowups_tro_classical()
{
    return check(tro_equivalent_graphs(blowup_p3_213(), blowup_p3_122()).equivalent, "skeletons isomorphic");
}

Outcome p3_blowups_channel()
{
    Graph g = blowup_p3_213();
    auto [sk, f] = skeleton_graph(g);
    KrausMap theta = canonical_pullback_channel(f);
    MatSubspace pb = pullback(graph_operator_system(sk), theta);
    double d = subspace_defect(pb, graph_operator_system(g).space());
    return check(theta.kraus.size() == 6 && d < 1e-8, "6 Kraus operators, pullback defect " + num(d));
}

Outcome p3_blowups_faithful() { return check(is_faithful(quotient_channel(blowup_p3_213())).faithful, "surjective"); }

Outcome p3_blowups_star_hom() { return check(is_star_homomorphism(quotient_channel(blowup_p3_213())), "theta_f"); }

Outcome p3_blowups_full_pullback()
{
    Graph g = blowup_p3_213();
    auto [sk, f] = skeleton_graph(g);
    auto v = is_pullback_homomorphism(canonical_pullback_channel(f), graph_operator_system(sk),
                                      graph_operator_system(g));
    return check(v == PullbackVerdict::FullPullback, verdict_name(v));
}

Outcome p3_blowups_quantum_skeleton()
{
    auto res = quantum_skeleton(graph_operator_system(blowup_p3_213()));
    Decision d = decide_tro_equivalence(res.reduced_graph(), graph_operator_system(path_graph(3)));
    return check(res.block_count() == 3 && d.kind == DecisionKind::Equivalent
                     && subspace_defect(res.reduced_algebra, diagonal_algebra(3)) < 1e-8,
                 "skeleton (S_P3, D3) up to a permutation");
}

Outcome p3_blowups_fingerprints()
{
    auto a = skeleton_fingerprint(quantum_skeleton(graph_operator_system(blowup_p3_213())));
    auto b = skeleton_fingerprint(quantum_skeleton(graph_operator_system(blowup_p3_122())));
    return check(a == b, "fingerprints equal");
}

Outcome p3_blowups_decide()
{
    Decision d = decide_tro_equivalence(graph_operator_system(blowup_p3_213()), graph_operator_system(blowup_p3_122()));
    return check(d.kind == DecisionKind::Equivalent && d.witness_report.passed(), decision_name(d.kind));
}

Outcome p3_blowups_balance()
{
    auto s = graph_operator_system(blowup_p3_213());
    auto t = graph_operator_system(blowup_p3_122());
    Decision d = decide_tro_equivalence(s, t);
    if (!d.witness)
        return failure("no witness");
    auto bal = balance_tro(*d.witness, s, t);
    auto blocks = block_decomposition(bal.tro.right()).blocks;
    std::vector<Index> alphas;
    for (auto b : blocks)
        alphas.push_back(b.alpha);
    std::sort(alphas.begin(), alphas.end());
    return check(bal.report.passed() && alphas == std::vector<Index>{1, 2, 3}, "[N*N] has blocks 2,1,3");
}

Outcome k2k2_paw_twins()
{
    bool g = same_classes(true_twin_classes(two_disjoint_edges()), {{0, 1}, {2, 3}});
    bool h = same_classes(true_twin_classes(paw()), {{0}, {1}, {2, 3}});
    return check(g && h, "two classes of size 2; paw classes {b1},{b2},{b3,b4}");
}

Outcome k2k2_paw_skeletons()
{
    auto g = skeleton_graph(two_disjoint_edges()).first;
    auto h = skeleton_graph(paw()).first;
    bool ok = g == Graph(2) && graph_isomorphism(h, path_graph(3)).has_value() && !graph_isomorphism(g, h);
    return check(ok, "G° two isolated vertices, H° = P3, not isomorphic");
}

Outcome k2k2_paw_independence()
{
    return check(independence_number(two_disjoint_edges()) == 2 && independence_number(paw()) == 2, "alpha = 2");
}

Outcome k2k2_paw_tro_classical()
{
    bool a = tro_equivalent_graphs(two_disjoint_edges(), paw()).equivalent;
    Graph gc = two_disjoint_edges().complement();
    Graph hc = paw().complement();
    bool twin_free = true_twin_classes(gc).classes.size() == 4 && true_twin_classes(hc).classes.size() == 4;
    bool b = tro_equivalent_graphs(gc, hc).equivalent;
    return check(!a && !b && twin_free, "pair and complements inequivalent");
}

Outcome k2k2_paw_multiplier()
{
    auto s = graph_operator_system(two_disjoint_edges());
    MatSubspace as = multiplier_algebra(s.system());
    std::vector<CMatrix> units;
    for (int c : {0, 2})
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                units.push_back(matrix_unit(4, 4, c + i, c + j));
    double d = subspace_defect(as, orthonormalize(units, 4, 4));
    return check(d < 1e-8, "A_S = M2 (+) M2, defect " + num(d));
}

Outcome k2k2_paw_fingerprints()
{
    auto a = skeleton_fingerprint(quantum_skeleton(graph_operator_system(two_disjoint_edges())));
    auto b = skeleton_fingerprint(quantum_skeleton(graph_operator_system(paw())));
    return check(!(a == b), "fingerprints differ in " + a.difference(b));
}

Outcome k2k2_paw_decide()
{
    Decision d = decide_tro_equivalence(graph_operator_system(two_disjoint_edges()), graph_operator_system(paw()));
    return check(d.kind == DecisionKind::NotEquivalent, decision_name(d.kind) + std::string(": ") + d.reason);
}

Outcome k2k2_paw_params()
{
    auto s = graph_operator_system(two_disjoint_edges());
    return check(independence_number(two_disjoint_edges()) == 2 && !is_connected(s.system()),
                 "alpha 2, disconnected");
}

Outcome graph_systems_valid()
{
    for (const Graph& g : {blowup_p3_213(), blowup_p3_122(), two_disjoint_edges(), paw()}) {
        auto q = graph_operator_system(g);
        validate_quantum_graph(q.space(), q.algebra());
        if (irreducibility_test(q.system()) != Irreducibility::MultiplicityFree)
            return failure("graph system not multiplicity-free");
    }
    return pass("valid quantum graphs on D_n, multiplicity-free");
}

Outcome path_system_checks()
{
    MatSubspace s = path_system_m2();
    validate_operator_system(s);
    validate_quantum_graph(s, full_space(2, 2));
    return check(equals(adjoint_space(s), s), "self-adjoint operator system, quantum graph over M2");
}

Outcome complete_graphs()
{
    bool ok = tro_equivalent_graphs(complete_graph(2), complete_graph(3)).equivalent;
    TroSpace m = tro_from_space(full_space(3, 2));
    auto rep = verify_tro_equivalence(m, graph_operator_system(complete_graph(2)),
                                      graph_operator_system(complete_graph(3)));
    bool params = clique_number(complete_graph(2)) == 2 && clique_number(complete_graph(3)) == 3
        && chromatic_number(complete_graph(2)) == 2 && chromatic_number(complete_graph(3)) == 3;
    return check(ok && rep.passed() && params, "K2 ~ K3 via M_{3,2}; omega and chi differ");
}

Outcome mixed_cstar()
{
    auto p = mixed_block_pair();
    validate_quantum_graph(p.s.space(), p.s.algebra());
    validate_quantum_graph(p.t.space(), p.t.algebra());
    bool ok = generated_cstar(p.s.space()).dim() == 49 && is_connected(p.s.system());
    return check(ok, "C*(S) = M7");
}

Outcome mixed_skeleton()
{
    auto p = mixed_block_pair();
    auto rs = quantum_skeleton(p.s);
    auto rt = quantum_skeleton(p.t);
    bool s_blocks = rs.blocks.blocks == std::vector<Block>{{2, 2}, {1, 3}};
    bool t_blocks = rt.blocks.blocks == std::vector<Block>{{3, 2}, {2, 3}};
    bool r12 = rs.slice_blocks[0][1].dim() == 6 && rs.slice_blocks[0][0].dim() == 1
        && rs.slice_blocks[1][1].dim() == 1;
    return check(s_blocks && t_blocks && r12, "blocks (2,2),(1,3) and (3,2),(2,3); dim R12 = 6");
}

Outcome mixed_decide()
{
    auto p = mixed_block_pair();
    Decision d = decide_tro_equivalence(p.s, p.t);
    return check(d.kind == DecisionKind::Equivalent && d.witness_report.passed(), decision_name(d.kind));
}

Outcome doubling_kraus()
{
    auto a = doubling_amplification();
    auto rep = validate_kraus(a.theta);
    return check(rep.passed() && is_faithful(a.theta).faithful, "theta(x) = x (+) x valid and faithful");
}

Outcome doubling_pullback()
{
    auto a = doubling_amplification();
    double d = subspace_defect(pullback(a.small, a.theta), a.large.space());
    double e = subspace_defect(pushforward(a.large, a.theta), a.small.space());
    return check(d < 1e-8 && e < 1e-8 && a.large.space().dim() == 12,
                 "pullback = M2 (x) S, pushforward = S; defects " + num(d) + ", " + num(e));
}

Outcome doubling_strong()
{
    auto a = doubling_amplification();
    validate_quantum_graph(a.large.space(), a.large.algebra());
    bool strong = is_strong_cohomomorphism(a.theta, a.large.space(), a.small.space());
    auto v = is_pullback_homomorphism(a.theta, a.small, a.large);
    return check(strong && v == PullbackVerdict::FullPullback, verdict_name(v));
}

Outcome doubling_decide()
{
    auto a = doubling_amplification();
    Decision d = decide_tro_equivalence(a.small, a.large);
    return check(d.kind == DecisionKind::Equivalent && d.witness_report.passed(), decision_name(d.kind));
}

Outcome ucp_counterexample()
{
    KrausMap phi = diagonal_ucp_counterexample();
    CMatrix img = apply_ucp(phi, matrix_unit(3, 3, 0, 0));
    CMatrix expect = 0.5 * (matrix_unit(3, 3, 0, 0) + matrix_unit(3, 3, 2, 2));
    bool valid = validate_kraus(phi).passed();
    bool faithful = is_faithful(phi).faithful;
    bool hom = is_star_homomorphism(phi);
    double d = subspace_defect(pullback(diagonal_algebra(3), phi), full_space(3, 3));
    return check(valid && faithful && !hom && max_abs_diff(img, expect) < 1e-12 && d < 1e-8,
                 "faithful, not a *-homomorphism, pullback of D3 is M3");
}

Outcome non_surjective_channel()
{
    // Constant map K3 -> one vertex of a 2-vertex edgeless graph.
    VertexMap f{complete_graph(3), Graph(2), {0, 0, 0}};
    KrausMap theta = canonical_pullback_channel(f);
    auto v = is_pullback_homomorphism(theta, graph_operator_system(Graph(2)), graph_operator_system(complete_graph(3)));
    return check(!is_faithful(theta).faithful && v == PullbackVerdict::Pullback, verdict_name(v));
}

Outcome full_matrix_tro()
{
    TroSpace m = tro_from_space(full_space(3, 2));
    auto s = QuantumGraph::trusted(full_space(2, 2), full_space(2, 2));
    auto t = QuantumGraph::trusted(full_space(3, 3), full_space(3, 3));
    return check(verify_tro_equivalence(m, s, t).passed() && verify_balanced_equivalence(m, s, t).passed(),
                 "M_{3,2} implements M2 ~ M3, balanced");
}

Outcome balanced_graph_systems()
{
    Graph g = blowup_p3_213();
    std::vector<int> perm = {3, 0, 5, 1, 4, 2};
    CMatrix u = permutation_matrix(perm);
    auto s = graph_operator_system(g);
    Graph h(g.n());
    for (auto [i, j] : g.edges())
        h.add_edge(perm[i], perm[j]);
    auto t = graph_operator_system(h);
    std::vector<CMatrix> span;
    for (int i = 0; i < g.n(); ++i)
        span.push_back(matrix_unit(g.n(), g.n(), i, i) * u);
    TroSpace m = tro_from_space(orthonormalize(span, g.n(), g.n()));
    bool iso = graph_isomorphism(g, h).has_value();
    return check(verify_balanced_equivalence(m, s, t).passed() && iso, "M = D_n u balanced, G = H");
}

Outcome balanced_counterexample()
{
    TroSpace m = tro_from_space(full_space(3, 2));
    auto s = QuantumGraph::trusted(full_space(2, 2), full_space(2, 2));
    auto t = QuantumGraph::trusted(full_space(3, 3), scalar_algebra(3));
    auto rep = verify_balanced_equivalence(m, s, t);
    bool systems = rep.find("MtTM_eq_S")->passed && rep.find("MSMt_eq_T")->passed;
    bool algebras = rep.find("MAMt_in_B")->passed;
    return check(systems && !algebras && !rep.passed(), "S ~ T holds, A ~ B fails");
}

std::vector<Case> make_corpus()
{
    return {
        {"p3-blowups.twin-classes", p3_blowups_twins},
        {"p3-blowups.skeletons", p3_blowups_skeletons},
        {"p3-blowups.blowups", p3_blowups_blowups},
        {"p3-blowups.tro-classical", p3_blowups_tro_classical},
        {"p3-blowups.canonical-channel", p3_blowups_channel},
        {"p3-blowups.faithful", p3_blowups_faithful},
        {"p3-blowups.star-homomorphism", p3_blowups_star_hom},
        {"p3-blowups.full-pullback", p3_blowups_full_pullback},
        {"p3-blowups.quantum-skeleton", p3_blowups_quantum_skeleton},
        {"p3-blowups.fingerprints", p3_blowups_fingerprints},
        {"p3-blowups.decide", p3_blowups_decide},
        {"p3-blowups.balance", p3_blowups_balance},
        {"2k2-paw.twin-classes", k2k2_paw_twins},
        {"2k2-paw.skeletons", k2k2_paw_skeletons},
        {"2k2-paw.independence", k2k2_paw_independence},
        {"2k2-paw.tro-classical", k2k2_paw_tro_classical},
        {"2k2-paw.multiplier", k2k2_paw_multiplier},
        {"2k2-paw.fingerprints", k2k2_paw_fingerprints},
        {"2k2-paw.decide", k2k2_paw_decide},
        {"2k2-paw.params", k2k2_paw_params},
        {"graph-systems.valid", graph_systems_valid},
        {"path-system.operator-system", path_system_checks},
        {"complete-graphs.tro", complete_graphs},
        {"mixed-blocks.cstar", mixed_cstar},
        {"mixed-blocks.skeleton", mixed_skeleton},
        {"mixed-blocks.decide", mixed_decide},
        {"doubling.kraus", doubling_kraus},
        {"doubling.pullback", doubling_pullback},
        {"doubling.strong", doubling_strong},
        {"doubling.decide", doubling_decide},
        {"ucp-counterexample", ucp_counterexample},
        {"non-surjective-channel", non_surjective_channel},
        {"full-matrix.tro", full_matrix_tro},
        {"balanced.graph-systems", balanced_graph_systems},
        {"balanced.counterexample", balanced_counterexample},
    };
}

Outcome guarded(const Case& c)
{
    try {
        return c.run();
    } catch (const std::exception& e) {
        return failure(std::string("exception: ") + e.what());
    }
}

} // namespace

const std::vector<Case>& builtin()
{
    static const std::vector<Case> cases = make_corpus();
    return cases;
}

std::vector<Result> run(const std::vector<std::string>& names, const std::string& filter)
{
    std::vector<const Case*> chosen;
    std::set<std::string> wanted(names.begin(), names.end());
    for (const auto& c : builtin())
        if ((wanted.empty() || wanted.count(c.name)) && c.name.find(filter) != std::string::npos)
            chosen.push_back(&c);

    std::vector<Result> results(chosen.size());
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t start = 0; start < chosen.size(); start += workers) {
        std::vector<std::future<void>> pending;
        for (std::size_t i = start; i < std::min(chosen.size(), start + workers); ++i)
            pending.push_back(std::async(std::launch::async, [&, i] {
                auto t0 = std::chrono::steady_clock::now();
                results[i].name = chosen[i]->name;
                results[i].outcome = guarded(*chosen[i]);
                results[i].wall_ms
                    = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            }));
        for (auto& p : pending)
            p.get();
    }
    return results;
}

std::vector<std::string> names_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || j.value("kind", "") != "corpus" || !j.contains("cases") || !j["cases"].is_array())
        throw Error(ErrorCode::ParseError, "corpus file must be {\"kind\": \"corpus\", \"cases\": [...]}");
    std::set<std::string> known;
    for (const auto& c : builtin())
        known.insert(c.name);
    std::vector<std::string> out;
    for (const auto& n : j["cases"]) {
        if (!n.is_string())
            throw Error(ErrorCode::ParseError, "corpus case names must be strings");
        if (!known.count(n.get<std::string>()))
            throw Error(ErrorCode::ParseError, "unknown corpus case '" + n.get<std::string>() + "'");
        out.push_back(n.get<std::string>());
    }
    return out;
}

} // namespace qgraph::corpus
