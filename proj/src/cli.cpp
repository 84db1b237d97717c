#include "qgraph/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <optional>

#include <CLI11.hpp>

#include "qgraph/corpus.hpp"
#include "qgraph/io.hpp"
#include "qgraph/skeleton.hpp"

namespace qgraph::cli {

namespace {

using io::json;

struct Settings {
    Tolerance tol;
    std::uint64_t seed = 0;
    int restarts = SearchBudget{}.restarts;
    int iterations = SearchBudget{}.iterations;
    std::string format = "json";
    std::string out_file;
};

struct Report {
    Report() = default;
    Report(std::string c, std::string v = {}) : command(std::move(c)), verdict(std::move(v)) {}

    std::string command;
    std::string verdict;
    json residuals = json::object();
    json witness;
    json extra = json::object();
    int exit_code = Pass;

    void residual(const std::string& name, double value) { residuals[name] = value; }
    void checks(const CheckReport& r, const std::string& prefix = {})
    {
        for (const auto& c : r.checks)
            residual(prefix + c.name, c.residual);
    }
};

json to_json(const Report& r, const Settings& s, double wall_ms)
{
    json j = {{"command", r.command},
              {"verdict", r.verdict},
              {"residuals", r.residuals},
              {"tolerances", {{"rank_eps", s.tol.rank_eps}, {"member_eps", s.tol.member_eps}}},
              {"seed", s.seed}};
    if (!r.witness.is_null())
        j["witness"] = r.witness;
    for (auto it = r.extra.begin(); it != r.extra.end(); ++it)
        j[it.key()] = it.value();
    j["wall_time_ms"] = wall_ms;
    return j;
}

void print_text(std::ostream& out, const json& j)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "residuals") {
            for (auto r = it->begin(); r != it->end(); ++r)
                out << "residual " << r.key() << ": " << r->dump() << "\n";
        } else if (it->is_string()) {
            out << it.key() << ": " << it->get<std::string>() << "\n";
        } else {
            out << it.key() << ": " << it->dump() << "\n";
        }
    }
}

QuantumGraph load_quantum_graph(const std::string& path, const Settings& s)
{
    json j = io::load_file(path);
    std::string kind = io::kind_of(j);
    if (kind == "graph")
        return graph_operator_system(io::graph_from_json(j), s.tol);
    if (kind == "quantum_graph") {
        auto [sys, alg] = io::quantum_graph_from_json(j, s.tol);
        return validate_quantum_graph(sys, alg);
    }
    throw Error(ErrorCode::ParseError, path + ": expected a graph or quantum_graph file, got " + kind);
}

MatSubspace load_tro(const std::string& path, const Settings& s)
{
    json j = io::load_file(path);
    std::string kind = io::kind_of(j);
    if (kind != "tro" && kind != "subspace")
        throw Error(ErrorCode::ParseError, path + ": expected a tro file, got " + kind);
    return io::tro_from_json(j, s.tol);
}

void emit(const Settings& s, const json& object, Report& r)
{
    if (!s.out_file.empty())
        io::save_file(s.out_file, object);
    r.extra["output"] = object;
}

// validate ------------------------------------------------------------------

// Irreducibility is only certified through the multiplicity-free test; say so in reports.
std::string irreducibility_label(const MatSubspace& sys)
{
    return irreducibility_test(OperatorSystem::trusted(sys)) == Irreducibility::MultiplicityFree
        ? "multiplicity-free (proxy for irreducible)"
        : "not multiplicity-free (proxy for irreducible)";
}

Report cmd_validate(const std::string& path, const Settings& s)
{
    Report r{"validate", "OK"};
    json j = io::load_file(path);
    const std::string kind = io::kind_of(j);
    r.extra["kind"] = kind;
    try {
        if (kind == "graph") {
            Graph g = io::graph_from_json(j);
            QuantumGraph q = graph_operator_system(g, s.tol);
            validate_quantum_graph(q.space(), q.algebra());
            r.extra["dim"] = q.space().dim();
            r.extra["irreducibility"] = irreducibility_label(q.space());
        } else if (kind == "operator_system") {
            MatSubspace sys = io::operator_system_from_json(j, s.tol);
            validate_operator_system(sys);
            r.extra["dim"] = sys.dim();
            r.extra["irreducibility"] = irreducibility_label(sys);
        } else if (kind == "quantum_graph") {
            auto [sys, alg] = io::quantum_graph_from_json(j, s.tol);
            validate_quantum_graph(sys, alg);
            r.extra["dim"] = sys.dim();
            r.extra["irreducibility"] = irreducibility_label(sys);
        } else if (kind == "kraus") {
            KrausMap phi = io::kraus_from_json(j, s.tol);
            CheckReport rep = validate_kraus(phi);
            r.checks(rep);
            if (!rep.passed())
                r.verdict = "ValidationFailed";
        } else if (kind == "tro") {
            MatSubspace m = io::tro_from_json(j, s.tol);
            double d = tro_axiom_defect(m);
            Nondegeneracy nd = nondegeneracy(m);
            r.residual("tro_axiom", d);
            r.residual("missing_range_dim", static_cast<double>(m.rows() - nd.range_dim));
            r.residual("missing_corange_dim", static_cast<double>(m.cols() - nd.corange_dim));
            if (d > s.tol.member_eps || !nd.ok)
                r.verdict = "ValidationFailed";
        } else if (kind == "subspace") {
            r.extra["dim"] = io::subspace_from_json(j, s.tol).dim();
        } else if (kind == "corpus") {
            r.extra["cases"] = corpus::names_from_json(j).size();
        } else if (kind == "vectors") {
            if (!j.contains("dim") || !j["dim"].is_number_integer())
                throw Error(ErrorCode::ParseError, "vectors file needs an integer 'dim'");
            r.extra["count"] = io::vectors_from_json(j, j["dim"].get<Index>()).size();
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError)
            throw;
        r.verdict = "ValidationFailed";
        r.residual(error_name(e.code()), e.residual());
        r.extra["reason"] = e.what();
    }
    r.exit_code = r.verdict == "OK" ? Pass : Fail;
    return r;
}

// skeleton ------------------------------------------------------------------

Report cmd_skeleton_classical(const std::string& path, const Settings& s)
{
    Report r{"skeleton", "OK"};
    Graph g = io::graph_from_json(io::load_file(path));
    auto [sk, f] = skeleton_graph(g);
    json classes = json::array();
    for (const auto& c : true_twin_classes(g).classes)
        classes.push_back(c);
    r.witness = {{"classes", classes}, {"quotient_map", f.image}};
    r.extra["skeleton_vertices"] = sk.n();
    emit(s, io::graph_to_json(sk), r);
    return r;
}

Report cmd_skeleton_quantum(const std::string& path, const Settings& s)
{
    Report r{"skeleton", "OK"};
    QuantumGraph q = load_quantum_graph(path, s);
    SkeletonResult res = quantum_skeleton(q, s.seed);
    r.residual("factorization", res.factorization_residual);
    json blocks = json::array();
    for (auto b : res.blocks.blocks)
        blocks.push_back({{"alpha", b.alpha}, {"n", b.n}});
    r.witness = {{"blocks", blocks}};
    r.extra["skeleton_dim"] = res.reduced_dim();
    r.extra["irreducibility"] = "multiplicity-free (proxy for irreducible)";
    emit(s, io::quantum_graph_to_json(res.reduced_graph()), r);
    return r;
}

// tro -----------------------------------------------------------------------

Report cmd_tro_decide(const std::string& a, const std::string& b, const Settings& s)
{
    Report r{"tro"};
    QuantumGraph qs = load_quantum_graph(a, s);
    QuantumGraph qt = load_quantum_graph(b, s);
    Decision d = decide_tro_equivalence(qs, qt, {s.restarts, s.iterations, s.seed});
    r.verdict = decision_name(d.kind);
    r.extra["reason"] = d.reason;
    r.checks(d.witness_report);
    if (d.kind != DecisionKind::NotEquivalent)
        r.residual("search", d.search_defect);
    if (d.witness) {
        r.witness = io::tro_to_json(d.witness->space());
        if (!s.out_file.empty())
            io::save_file(s.out_file, r.witness);
    }
    r.exit_code = d.kind == DecisionKind::Equivalent ? Pass : d.kind == DecisionKind::NotEquivalent ? Fail : Undecided;
    return r;
}

Report verdict_from(Report r, const CheckReport& rep)
{
    r.checks(rep);
    r.verdict = rep.passed() ? "Pass" : "Fail";
    r.exit_code = rep.passed() ? Pass : Fail;
    return r;
}

Report cmd_tro_verify(const std::string& m, const std::string& a, const std::string& b, const Settings& s)
{
    QuantumGraph qs = load_quantum_graph(a, s);
    QuantumGraph qt = load_quantum_graph(b, s);
    return verdict_from({"tro"}, verify_tro_equivalence(TroSpace::trusted(load_tro(m, s)), qs, qt));
}

Report cmd_tro_balanced(const std::string& m, const std::string& a, const std::string& b, const Settings& s)
{
    QuantumGraph qs = load_quantum_graph(a, s);
    QuantumGraph qt = load_quantum_graph(b, s);
    json j = io::load_file(m);
    if (io::kind_of(j) == "kraus")
        return verdict_from({"tro"}, verify_balanced_equivalence(io::kraus_from_json(j, s.tol), qs, qt));
    return verdict_from({"tro"}, verify_balanced_equivalence(TroSpace::trusted(load_tro(m, s)), qs, qt));
}

// morita --------------------------------------------------------------------

MatSubspace load_system_space(const std::string& path, const Settings& s)
{
    json j = io::load_file(path);
    std::string kind = io::kind_of(j);
    if (kind == "graph")
        return graph_operator_system(io::graph_from_json(j), s.tol).space();
    if (kind == "quantum_graph")
        return io::quantum_graph_from_json(j, s.tol).first;
    if (kind == "operator_system")
        return io::operator_system_from_json(j, s.tol);
    if (kind == "subspace")
        return io::subspace_from_json(j, s.tol);
    throw Error(ErrorCode::ParseError, path + ": expected a system file, got " + kind);
}

Report cmd_morita(const std::string& mode, const std::string& kraus, const std::string& system,
                  const std::string& source, const std::string& target, const Settings& s)
{
    Report r{"morita", "OK"};
    r.extra["mode"] = mode;
    KrausMap phi = io::kraus_from_json(io::load_file(kraus), s.tol);
    CheckReport valid = validate_kraus(phi);
    r.checks(valid, "kraus.");
    if (!valid.passed())
        throw Error(ErrorCode::NotUnital, "Kraus map is not a ucp map into its codomain algebra");
    if (mode == "pullback" || mode == "pushforward") {
        if (system.empty())
            throw Error(ErrorCode::ParseError, "--system is required");
        MatSubspace sys = load_system_space(system, s);
        MatSubspace out;
        if (mode == "pullback") {
            PullbackResult pb = pullback_detailed(sys, phi);
            r.residual("closure", pb.closure_defect);
            out = pb.space;
        } else {
            out = pushforward(sys, phi);
        }
        r.extra["dim"] = out.dim();
        emit(s, io::subspace_to_json(out), r);
        return r;
    }
    if (source.empty() || target.empty())
        throw Error(ErrorCode::ParseError, "--check-pullback needs --source (on K) and --target (on H)");
    QuantumGraph t = load_quantum_graph(source, s);
    QuantumGraph sg = load_quantum_graph(target, s);
    PullbackHomReport rep = pullback_homomorphism_report(phi, t, sg);
    r.verdict = verdict_name(rep.verdict);
    r.residual("pullback", rep.pullback_defect);
    r.residual("pushforward", rep.pushforward_defect);
    r.extra["faithful"] = rep.faithful;
    r.exit_code = rep.verdict == PullbackVerdict::No ? Fail : Pass;
    return r;
}

// params --------------------------------------------------------------------

json set_report(const VectorSetReport& v)
{
    json failures = json::array();
    for (const auto& f : v.failures)
        failures.push_back({{"i", f.i}, {"j", f.j}, {"residual", f.residual}});
    return {{"ok", v.ok}, {"failures", failures}};
}

Report cmd_params(const std::string& path, const std::string& independent, const std::string& clique,
                  const Settings& s)
{
    Report r{"params", "OK"};
    json j = io::load_file(path);
    json values = json::object();
    if (io::kind_of(j) == "graph") {
        Graph g = io::graph_from_json(j);
        values["alpha"] = independence_number(g);
        values["omega"] = clique_number(g);
        values["chi"] = chromatic_number(g);
        values["connected"] = is_connected_graph(g);
    }
    QuantumGraph q = load_quantum_graph(path, s);
    if (!values.contains("connected"))
        values["connected"] = is_connected(q.system());
    bool ok = true;
    auto certificate = [&](const std::string& file, const char* name, bool clique_set) {
        if (file.empty())
            return;
        auto vs = io::vectors_from_json(io::load_file(file), q.n());
        VectorSetReport v = clique_set ? verify_clique_set(q.space(), vs) : verify_independent_set(q.space(), vs);
        r.residual(std::string(name) + ".orthonormality", v.orthonormality_residual);
        double worst = 0.0;
        for (const auto& f : v.failures)
            worst = std::max(worst, f.residual);
        r.residual(std::string(name) + ".membership", worst);
        values[name] = set_report(v);
        values[name]["size"] = vs.size();
        ok = ok && v.ok;
    };
    certificate(independent, "independent_set", false);
    certificate(clique, "clique_set", true);
    r.extra["values"] = values;
    if (!ok) {
        r.verdict = "Fail";
        r.exit_code = Fail;
    }
    return r;
}

// selftest ------------------------------------------------------------------

Report cmd_selftest(const std::string& which, const std::string& filter, std::ostream& err)
{
    Report r{"selftest"};
    std::vector<std::string> names;
    if (which != "builtin" && which != "paper")
        names = corpus::names_from_json(io::load_file(which));
    auto results = corpus::run(names, filter);
    json cases = json::array();
    std::size_t passed = 0;
    for (const auto& c : results) {
        cases.push_back({{"name", c.name}, {"passed", c.outcome.passed}, {"detail", c.outcome.detail}});
        passed += c.outcome.passed;
        if (!c.outcome.passed)
            err << "selftest: " << c.name << " failed: " << c.outcome.detail << "\n";
    }
    r.extra["cases"] = cases;
    r.extra["passed"] = passed;
    r.extra["total"] = results.size();
    const bool ok = passed == results.size();
    r.verdict = ok ? "Pass" : "Fail";
    r.exit_code = ok ? Pass : Fail;
    return r;
}

std::uint64_t default_seed()
{
    if (const char* env = std::getenv("QGRAPH_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "QGRAPH_SEED must be a non-negative integer");
        }
    }
    return 0;
}

int exit_for(ErrorCode code)
{
    return code == ErrorCode::BudgetExceeded ? Undecided : InputError;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Settings s;
    const auto start = std::chrono::steady_clock::now();
    std::string command = "qgraph";

    CLI::App app{"Quantum graph skeletons, pullbacks and TRO-equivalence"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--tol-rank", s.tol.rank_eps, "Rank tolerance")->check(CLI::PositiveNumber);
    app.add_option("--tol-member", s.tol.member_eps, "Membership tolerance")->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", s.seed, "Random seed (default: QGRAPH_SEED or 0)");
    app.add_option("--budget-restarts", s.restarts, "Unitary search restarts")->check(CLI::NonNegativeNumber);
    app.add_option("--budget-iters", s.iterations, "Iterations per restart")->check(CLI::PositiveNumber);
    app.add_option("--format", s.format, "Report format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--out", s.out_file, "Write the produced object to FILE");

    std::string file;
    auto* validate = app.add_subcommand("validate", "Validate an input file by kind");
    validate->add_option("file", file)->required();

    std::string classical, quantum;
    auto* skeleton = app.add_subcommand("skeleton", "Classical or quantum skeleton");
    auto* sk_c = skeleton->add_option("--classical", classical, "Graph file");
    auto* sk_q = skeleton->add_option("--quantum", quantum, "Graph or quantum_graph file");
    sk_c->excludes(sk_q);
    skeleton->require_option(1);

    std::vector<std::string> decide, verify, balanced;
    auto* tro = app.add_subcommand("tro", "Decide or verify TRO-equivalence");
    auto* o_dec = tro->add_option("--decide", decide, "A B")->expected(2);
    auto* o_ver = tro->add_option("--verify", verify, "M A B")->expected(3);
    auto* o_bal = tro->add_option("--balanced", balanced, "M|KRAUS A B")->expected(3);
    o_dec->excludes(o_ver)->excludes(o_bal);
    o_ver->excludes(o_bal);
    tro->require_option(1);

    bool do_pull = false, do_push = false, do_check = false;
    std::string kraus, system, source, target;
    auto* morita = app.add_subcommand("morita", "Pullbacks, pushforwards and pullback checks");
    auto* f_pull = morita->add_flag("--pullback", do_pull);
    auto* f_push = morita->add_flag("--pushforward", do_push);
    auto* f_check = morita->add_flag("--check-pullback", do_check);
    f_pull->excludes(f_push)->excludes(f_check);
    f_push->excludes(f_check);
    morita->add_option("--kraus", kraus, "Kraus file")->required();
    morita->add_option("--system", system, "System file");
    morita->add_option("--source", source, "Quantum graph on K");
    morita->add_option("--target", target, "Quantum graph on H");

    std::string independent, clique;
    auto* params = app.add_subcommand("params", "Graph parameters and certificates");
    params->add_option("file", file)->required();
    params->add_option("--independent", independent, "Vectors to check as an independent set");
    params->add_option("--clique", clique, "Vectors to check as a clique");

    std::string corpus_name = "builtin", filter;
    auto* selftest = app.add_subcommand("selftest", "Run the regression corpus");
    selftest->add_option("--corpus", corpus_name, "'builtin' (alias 'paper') or a corpus file");
    selftest->add_option("--filter", filter, "Substring filter on case names");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Pass;
    } catch (const CLI::ParseError& e) {
        err << "qgraph: " << e.what() << "\n";
        return InputError;
    }

    Report r;
    try {
        if (seed_opt->count() == 0)
            s.seed = default_seed();
        if (*validate) {
            r = cmd_validate(file, s);
        } else if (*skeleton) {
            r = classical.empty() ? cmd_skeleton_quantum(quantum, s) : cmd_skeleton_classical(classical, s);
        } else if (*tro) {
            if (!decide.empty())
                r = cmd_tro_decide(decide[0], decide[1], s);
            else if (!verify.empty())
                r = cmd_tro_verify(verify[0], verify[1], verify[2], s);
            else
                r = cmd_tro_balanced(balanced[0], balanced[1], balanced[2], s);
        } else if (*morita) {
            if (!do_pull && !do_push && !do_check)
                throw Error(ErrorCode::ParseError, "one of --pullback, --pushforward, --check-pullback is required");
            r = cmd_morita(do_pull ? "pullback" : do_push ? "pushforward" : "check-pullback", kraus, system, source,
                           target, s);
        } else if (*params) {
            r = cmd_params(file, independent, clique, s);
        } else {
            r = cmd_selftest(corpus_name, filter, err);
        }
    } catch (const Error& e) {
        err << "qgraph: " << e.what() << "\n";
        command = app.get_subcommands().front()->get_name();
        r = Report{command, e.code() == ErrorCode::BudgetExceeded ? "Undecided" : error_name(e.code())};
        r.residual(error_name(e.code()), e.residual());
        r.exit_code = exit_for(e.code());
    } catch (const std::exception& e) {
        err << "qgraph: internal error: " << e.what() << "\n";
        return InputError;
    }

    const double wall
        = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    json j = to_json(r, s, wall);
    if (s.format == "text")
        print_text(out, j);
    else
        out << j.dump(2) << "\n";
    return r.exit_code;
}

} // namespace qgraph::cli
