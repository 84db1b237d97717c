#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "oracles.hpp"
#include "qgraph/cli.hpp"
#include "qgraph/instances.hpp"
#include "qgraph/io.hpp"

using namespace qgraph;
using io::json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    json report;
    std::string out;
    std::string err;
};

CliRun run_cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = qgraph::cli::run(args, out, err);
    CliRun r{code, json(), out.str(), err.str()};
    try {
        r.report = json::parse(r.out);
    } catch (const json::exception&) {
    }
    return r;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path()
            / ("qgraph_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const json& j)
    {
        std::string p = (dir_ / name).string();
        io::save_file(p, j);
        return p;
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

} // namespace

TEST(Io, GraphRoundTrip)
{
    Graph g = instances::blowup_p3_213();
    EXPECT_EQ(io::graph_from_json(io::parse_text(io::graph_to_json(g).dump())), g);
}

TEST(Io, SubspaceAndKrausRoundTrip)
{
    std::mt19937_64 rng(50);
    std::vector<CMatrix> xs = {oracle::gaussian(2, 3, rng), oracle::gaussian(2, 3, rng)};
    MatSubspace s = orthonormalize(xs, 2, 3);
    MatSubspace back = io::subspace_from_json(io::parse_text(io::subspace_to_json(s).dump()), {});
    EXPECT_LT(subspace_defect(s, back), 1e-12);

    KrausMap phi = instances::diagonal_ucp_counterexample();
    KrausMap psi = io::kraus_from_json(io::parse_text(io::kraus_to_json(phi).dump()), {});
    ASSERT_EQ(psi.kraus.size(), phi.kraus.size());
    for (std::size_t k = 0; k < phi.kraus.size(); ++k)
        EXPECT_EQ(max_abs_diff(psi.kraus[k], phi.kraus[k]), 0.0);

    QuantumGraph q = instances::mixed_block_pair().s;
    auto [sys, alg] = io::quantum_graph_from_json(io::parse_text(io::quantum_graph_to_json(q).dump()), {});
    EXPECT_LT(subspace_defect(sys, q.space()), 1e-12);
    EXPECT_LT(subspace_defect(alg, q.algebra()), 1e-12);
}

TEST(Io, ComplexScalarsArePairs)
{
    CMatrix m(1, 2);
    m << cd(1.5, -2.0), cd(0.0, 1.0);
    json j = io::matrix_to_json(m);
    EXPECT_EQ(j.dump(), "[[[1.5,-2.0],[0.0,1.0]]]");
    EXPECT_EQ(io::matrix_from_json(j, 1, 2), m);
}

TEST(Io, MalformedInputsAreParseErrors)
{
    auto code = [](const std::string& text) {
        try {
            json j = io::parse_text(text);
            io::kind_of(j);
            if (j.value("kind", "") == "graph")
                io::graph_from_json(j);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InternalError;
    };
    EXPECT_EQ(code("{bad"), ErrorCode::ParseError);
    EXPECT_EQ(code("{\"kind\": \"unicorn\"}"), ErrorCode::ParseError);
    EXPECT_EQ(code("{\"kind\": \"graph\", \"vertices\": 2, \"edges\": [[0, 0]]}"), ErrorCode::ParseError);
    EXPECT_EQ(code("{\"kind\": \"graph\", \"vertices\": 2, \"edges\": [[0, 5]]}"), ErrorCode::ParseError);
    EXPECT_EQ(code("[1, 2]"), ErrorCode::ParseError);
}

TEST_F(CliTest, ValidateVerdictsAndExitCodes)
{
    CliRun ok = run_cli({"validate", write("k3.json", io::graph_to_json(complete_graph(3)))});
    EXPECT_EQ(ok.code, 0);
    EXPECT_EQ(ok.report["verdict"], "OK");
    EXPECT_NE(ok.report["irreducibility"].get<std::string>().find("proxy"), std::string::npos);

    KrausMap bad = make_kraus_map({2.0 * CMatrix::Identity(2, 2)}, full_space(2, 2), full_space(2, 2));
    CliRun fail = run_cli({"validate", write("bad.json", io::kraus_to_json(bad))});
    EXPECT_EQ(fail.code, 1);
    EXPECT_EQ(fail.report["verdict"], "ValidationFailed");
    EXPECT_TRUE(fail.report["residuals"].contains("unital"));

    std::ofstream(path("broken.json")) << "{\"kind\": ";
    CliRun parse = run_cli({"validate", path("broken.json")});
    EXPECT_EQ(parse.code, 2);
    EXPECT_EQ(parse.report["verdict"], "ParseError");

    json not_os = {{"kind", "operator_system"}, {"dim", 2}, {"span", {io::matrix_to_json(matrix_unit(2, 2, 0, 1))}}};
    EXPECT_EQ(run_cli({"validate", write("os.json", not_os)}).code, 1);
}

TEST_F(CliTest, ClassicalSkeletonFile)
{
    std::string g = write("g.json", io::graph_to_json(instances::blowup_p3_213()));
    CliRun r = run_cli({"skeleton", "--classical", g, "--out", path("sk.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    Graph sk = io::graph_from_json(io::load_file(path("sk.json")));
    EXPECT_TRUE(oracle::isomorphic(sk, path_graph(3)));
    CliRun h = run_cli({"skeleton", "--classical", write("h.json", io::graph_to_json(instances::paw()))});
    EXPECT_TRUE(oracle::isomorphic(io::graph_from_json(h.report["output"]), path_graph(3)));
}

TEST_F(CliTest, QuantumSkeletonOfFullMatrices)
{
    json q = io::quantum_graph_to_json(QuantumGraph::trusted(full_space(5, 5), full_space(5, 5)));
    CliRun r = run_cli({"skeleton", "--quantum", write("m5.json", q), "--out", path("sk.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.report["skeleton_dim"], 1);
    auto [sys, alg] = io::quantum_graph_from_json(io::load_file(path("sk.json")), {});
    EXPECT_EQ(sys.dim(), 1);
    EXPECT_EQ(alg.dim(), 1);
}

TEST_F(CliTest, TroDecideExitCodes)
{
    std::string g1 = write("g1.json", io::graph_to_json(instances::blowup_p3_213()));
    std::string h1 = write("h1.json", io::graph_to_json(instances::blowup_p3_122()));
    std::string g2 = write("g2.json", io::graph_to_json(instances::two_disjoint_edges()));
    std::string h2 = write("h2.json", io::graph_to_json(instances::paw()));
    CliRun eq = run_cli({"tro", "--decide", g1, h1, "--out", path("m.json")});
    EXPECT_EQ(eq.code, 0) << eq.err;
    EXPECT_EQ(eq.report["verdict"], "Equivalent");
    EXPECT_TRUE(eq.report.contains("witness"));
    CliRun ne = run_cli({"tro", "--decide", g2, h2});
    EXPECT_EQ(ne.code, 1);
    EXPECT_EQ(ne.report["verdict"], "NotEquivalent");

    // The saved witness verifies through the --verify path.
    CliRun v = run_cli({"tro", "--verify", path("m.json"), g1, h1});
    EXPECT_EQ(v.code, 0) << v.err;
    EXPECT_EQ(v.report["verdict"], "Pass");
    CliRun vb = run_cli({"tro", "--verify", path("m.json"), g1, g1});
    EXPECT_EQ(vb.code, 2); // shape mismatch between witness and inputs
}

TEST_F(CliTest, TroUndecidedWithoutBudget)
{
    std::mt19937_64 rng(51);
    auto p = instances::mixed_block_pair();
    CMatrix u = oracle::haar_unitary(p.t.n(), rng);
    auto t = QuantumGraph::trusted(transform_space(p.t.space(), u, u.adjoint()),
                                   transform_space(p.t.algebra(), u, u.adjoint()));
    std::string a = write("s.json", io::quantum_graph_to_json(p.s));
    std::string b = write("t.json", io::quantum_graph_to_json(t));
    EXPECT_EQ(run_cli({"--budget-restarts", "0", "--budget-iters", "1", "tro", "--decide", a, b}).code, 3);
    EXPECT_EQ(run_cli({"tro", "--decide", a, b}).code, 0);
}

TEST_F(CliTest, TroBalancedKrausForm)
{
    Graph g = instances::blowup_p3_213();
    auto [sk, f] = skeleton_graph(g);
    std::string k = write("theta.json", io::kraus_to_json(canonical_pullback_channel(f)));
    // M*M generates the twin-class block algebra of S_G, not the diagonal.
    QuantumGraph sg = graph_operator_system(g);
    std::string s = write("g.json", io::quantum_graph_to_json(QuantumGraph::trusted(
                                         sg.space(), multiplier_algebra(OperatorSystem::trusted(sg.space())))));
    std::string t = write("sk.json", io::graph_to_json(sk));
    CliRun r = run_cli({"tro", "--balanced", k, s, t});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.report["verdict"], "Pass");
}

TEST_F(CliTest, MoritaPullbackAndCheck)
{
    Graph g = instances::blowup_p3_213();
    auto [sk, f] = skeleton_graph(g);
    std::string k = write("theta.json", io::kraus_to_json(canonical_pullback_channel(f)));
    std::string t = write("sk.json", io::graph_to_json(sk));
    std::string s = write("g.json", io::graph_to_json(g));
    CliRun pb = run_cli({"morita", "--pullback", "--kraus", k, "--system", t, "--out", path("pb.json")});
    ASSERT_EQ(pb.code, 0) << pb.err;
    MatSubspace got = io::subspace_from_json(io::load_file(path("pb.json")), {});
    EXPECT_LT(subspace_defect(got, orthonormalize(oracle::graph_system_span(g), 6, 6)), 1e-8);
    CliRun chk = run_cli({"morita", "--check-pullback", "--kraus", k, "--source", t, "--target", s});
    EXPECT_EQ(chk.code, 0);
    EXPECT_EQ(chk.report["verdict"], "FullPullback");
    CliRun push = run_cli({"morita", "--pushforward", "--kraus", k, "--system", s});
    EXPECT_EQ(push.report["dim"], static_cast<int>(oracle::graph_system_span(sk).size()));
}

TEST_F(CliTest, ParamsForGraphsAndQuantumGraphs)
{
    CliRun k4 = run_cli({"params", write("k4.json", io::graph_to_json(complete_graph(4)))});
    EXPECT_EQ(k4.report["values"]["alpha"], 1);
    EXPECT_EQ(k4.report["values"]["omega"], 4);
    EXPECT_EQ(k4.report["values"]["chi"], 4);
    EXPECT_EQ(k4.report["values"]["connected"], true);

    CliRun g = run_cli({"params", write("g.json", io::graph_to_json(instances::two_disjoint_edges()))});
    EXPECT_EQ(g.report["values"]["alpha"], 2);
    EXPECT_EQ(g.report["values"]["connected"], false);

    std::string m7 = write("m7.json", io::quantum_graph_to_json(instances::mixed_block_pair().s));
    CliRun q = run_cli({"params", m7});
    EXPECT_EQ(q.report["values"]["connected"], true);

    // Certificates: e_1, e_2 are independent in the paw, e_0, e_1 are not.
    auto vecs = [](std::vector<int> idx) {
        json arr = json::array();
        for (int i : idx) {
            CVector v = CVector::Zero(4);
            v(i) = 1.0;
            arr.push_back(io::vector_to_json(v));
        }
        return json{{"kind", "vectors"}, {"dim", 4}, {"vectors", arr}};
    };
    std::string paw = write("paw.json", io::graph_to_json(instances::paw()));
    EXPECT_EQ(run_cli({"params", paw, "--independent", write("i.json", vecs({1, 2}))}).code, 0);
    EXPECT_EQ(run_cli({"params", paw, "--independent", write("j.json", vecs({0, 1}))}).code, 1);
    EXPECT_EQ(run_cli({"params", paw, "--clique", write("c.json", vecs({0, 2, 3}))}).code, 0);
}

TEST_F(CliTest, SelftestFilterAndCorpusFiles)
{
    CliRun f = run_cli({"selftest", "--filter", "p3-blowups"});
    EXPECT_EQ(f.code, 0) << f.err;
    EXPECT_GT(f.report["total"].get<int>(), 0);
    EXPECT_EQ(f.report["passed"], f.report["total"]);
    for (const auto& c : f.report["cases"])
        EXPECT_NE(c["name"].get<std::string>().find("p3-blowups"), std::string::npos);

    json corpus = {{"kind", "corpus"}, {"cases", {"2k2-paw.decide", "ucp-counterexample"}}};
    CliRun c = run_cli({"selftest", "--corpus", write("c.json", corpus)});
    EXPECT_EQ(c.code, 0);
    EXPECT_EQ(c.report["total"], 2);

    std::ofstream(path("bad.json")) << "{\"kind\": \"corpus\", \"cases\": [1, 2";
    EXPECT_EQ(run_cli({"selftest", "--corpus", path("bad.json")}).code, 2);
    json unknown = {{"kind", "corpus"}, {"cases", {"no-such-case"}}};
    EXPECT_EQ(run_cli({"selftest", "--corpus", write("u.json", unknown)}).code, 2);
}

TEST_F(CliTest, ReportsAreDeterministicApartFromWallTime)
{
    std::string a = write("s.json", io::quantum_graph_to_json(instances::mixed_block_pair().s));
    std::string b = write("t.json", io::quantum_graph_to_json(instances::mixed_block_pair().t));
    CliRun r1 = run_cli({"--seed", "7", "tro", "--decide", a, b});
    CliRun r2 = run_cli({"--seed", "7", "tro", "--decide", a, b});
    r1.report.erase("wall_time_ms");
    r2.report.erase("wall_time_ms");
    EXPECT_EQ(r1.report.dump(), r2.report.dump());
    EXPECT_EQ(r1.report["seed"], 7);
    EXPECT_EQ(r1.report["tolerances"]["rank_eps"], 1e-9);
}

TEST_F(CliTest, SeedFromEnvironmentAndTextFormat)
{
    std::string g = write("g.json", io::graph_to_json(path_graph(3)));
    ::setenv("QGRAPH_SEED", "42", 1);
    CliRun env = run_cli({"validate", g});
    CliRun flag = run_cli({"--seed", "5", "validate", g});
    ::unsetenv("QGRAPH_SEED");
    EXPECT_EQ(env.report["seed"], 42);
    EXPECT_EQ(flag.report["seed"], 5);
    CliRun text = run_cli({"--format", "text", "validate", g});
    EXPECT_NE(text.out.find("verdict: OK"), std::string::npos);
    EXPECT_EQ(run_cli({"--format", "yaml", "validate", g}).code, 2);
}
