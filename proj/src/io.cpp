#include "qgraph/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace qgraph::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const json& field(const json& j, const char* name)
{
    if (!j.is_object() || !j.contains(name))
        fail(std::string("missing field '") + name + "'");
    return j.at(name);
}

Index positive_int(const json& j, const char* name)
{
    const json& v = field(j, name);
    if (!v.is_number_integer() || v.get<long long>() <= 0)
        fail(std::string("field '") + name + "' must be a positive integer");
    return v.get<Index>();
}

cd scalar_from_json(const json& j)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail("complex scalar must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<CMatrix> span_from_json(const json& j, Index rows, Index cols)
{
    if (!j.is_array())
        fail("span must be an array of matrices");
    std::vector<CMatrix> out;
    for (const auto& m : j)
        out.push_back(matrix_from_json(m, rows, cols));
    return out;
}

json span_to_json(const MatSubspace& s)
{
    json arr = json::array();
    for (Index k = 0; k < s.dim(); ++k)
        arr.push_back(matrix_to_json(s.element(k)));
    return arr;
}

} // namespace

json matrix_to_json(const CMatrix& m)
{
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

CMatrix matrix_from_json(const json& j, Index rows, Index cols)
{
    if (!j.is_array() || static_cast<Index>(j.size()) != rows)
        fail("matrix must have " + std::to_string(rows) + " rows");
    CMatrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const json& row = j[r];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            fail("matrix row must have " + std::to_string(cols) + " entries");
        for (Index c = 0; c < cols; ++c)
            m(r, c) = scalar_from_json(row[c]);
    }
    if (!m.allFinite())
        fail("matrix has non-finite entries");
    return m;
}

json vector_to_json(const CVector& v)
{
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i)
        arr.push_back({v(i).real(), v(i).imag()});
    return arr;
}

CVector vector_from_json(const json& j, Index len)
{
    if (!j.is_array() || static_cast<Index>(j.size()) != len)
        fail("vector must have " + std::to_string(len) + " entries");
    CVector v(len);
    for (Index i = 0; i < len; ++i)
        v(i) = scalar_from_json(j[i]);
    return v;
}

json graph_to_json(const Graph& g)
{
    json edges = json::array();
    for (auto [i, j] : g.edges())
        edges.push_back({i, j});
    return {{"kind", "graph"}, {"vertices", g.n()}, {"edges", edges}};
}

Graph graph_from_json(const json& j)
{
    const json& nv = field(j, "vertices");
    if (!nv.is_number_integer() || nv.get<long long>() < 0)
        fail("'vertices' must be a non-negative integer");
    const int n = nv.get<int>();
    const json& edges = field(j, "edges");
    if (!edges.is_array())
        fail("'edges' must be an array");
    Graph g(n);
    for (const auto& e : edges) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
            fail("edge must be a pair of vertex indices");
        int a = e[0].get<int>();
        int b = e[1].get<int>();
        if (a < 0 || b < 0 || a >= n || b >= n)
            fail("edge endpoint out of range");
        if (a == b)
            fail("loops are not allowed");
        if (g.adjacent(a, b))
            fail("duplicate edge");
        g.add_edge(a, b);
    }
    return g;
}

json subspace_to_json(const MatSubspace& s, const std::string& kind)
{
    return {{"kind", kind}, {"rows", s.rows()}, {"cols", s.cols()}, {"span", span_to_json(s)}};
}

MatSubspace subspace_from_json(const json& j, Tolerance tol)
{
    Index rows = positive_int(j, "rows");
    Index cols = positive_int(j, "cols");
    return orthonormalize(span_from_json(field(j, "span"), rows, cols), rows, cols, tol);
}

MatSubspace algebra_ref_from_json(const json& j, Index n, Tolerance tol)
{
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "full")
            return full_space(n, n, tol);
        if (name == "diagonal")
            return diagonal_algebra(n, tol);
        if (name == "scalar")
            return scalar_algebra(n, tol);
        fail("unknown algebra shorthand '" + name + "'");
    }
    return orthonormalize(span_from_json(j, n, n), n, n, tol);
}

json operator_system_to_json(const MatSubspace& s)
{
    return {{"kind", "operator_system"}, {"dim", s.rows()}, {"span", span_to_json(s)}};
}

MatSubspace operator_system_from_json(const json& j, Tolerance tol)
{
    Index n = positive_int(j, "dim");
    return orthonormalize(span_from_json(field(j, "span"), n, n), n, n, tol);
}

json quantum_graph_to_json(const QuantumGraph& g)
{
    return {{"kind", "quantum_graph"},
            {"dim", g.n()},
            {"system", span_to_json(g.space())},
            {"algebra", span_to_json(g.algebra())}};
}

std::pair<MatSubspace, MatSubspace> quantum_graph_from_json(const json& j, Tolerance tol)
{
    Index n = positive_int(j, "dim");
    MatSubspace s = orthonormalize(span_from_json(field(j, "system"), n, n), n, n, tol);
    MatSubspace a = algebra_ref_from_json(field(j, "algebra"), n, tol);
    return {s, a};
}

json kraus_to_json(const KrausMap& phi)
{
    json ks = json::array();
    for (const auto& v : phi.kraus)
        ks.push_back(matrix_to_json(v));
    return {{"kind", "kraus"},
            {"dim_h", phi.dim_h},
            {"dim_k", phi.dim_k},
            {"kraus", ks},
            {"domain_algebra", span_to_json(phi.domain_algebra)},
            {"codomain_algebra", span_to_json(phi.codomain_algebra)}};
}

KrausMap kraus_from_json(const json& j, Tolerance tol)
{
    Index h = positive_int(j, "dim_h");
    Index k = positive_int(j, "dim_k");
    auto ks = span_from_json(field(j, "kraus"), k, h);
    if (ks.empty())
        fail("Kraus list is empty");
    MatSubspace b = algebra_ref_from_json(field(j, "domain_algebra"), k, tol);
    MatSubspace a = algebra_ref_from_json(field(j, "codomain_algebra"), h, tol);
    return make_kraus_map(std::move(ks), std::move(b), std::move(a));
}

json tro_to_json(const MatSubspace& m) { return subspace_to_json(m, "tro"); }

MatSubspace tro_from_json(const json& j, Tolerance tol) { return subspace_from_json(j, tol); }

std::vector<CVector> vectors_from_json(const json& j, Index n)
{
    const json& arr = j.is_array() ? j : field(j, "vectors");
    if (!arr.is_array())
        fail("'vectors' must be an array");
    std::vector<CVector> out;
    for (const auto& v : arr)
        out.push_back(vector_from_json(v, n));
    return out;
}

std::string kind_of(const json& j)
{
    if (!j.is_object())
        fail("top-level value must be an object");
    if (j.contains("kind")) {
        if (!j["kind"].is_string())
            fail("'kind' must be a string");
        static const std::set<std::string> kinds = {"graph", "subspace", "operator_system", "quantum_graph",
                                                    "kraus", "tro", "vectors", "corpus"};
        std::string k = j["kind"].get<std::string>();
        if (!kinds.count(k))
            fail("unknown kind '" + k + "'");
        return k;
    }
    if (j.contains("vertices") && j.contains("edges"))
        return "graph";
    fail("missing field 'kind'");
}

json parse_text(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
}

json load_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

void save_file(const std::string& path, const json& j)
{
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << j.dump(2) << "\n";
}

} // namespace qgraph::io
