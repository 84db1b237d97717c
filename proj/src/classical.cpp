#include "qgraph/classical.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace qgraph {

Graph::Graph(int n)
    : n_(n)
    , adj_(n, std::vector<char>(n, 0))
{
    if (n < 0)
        throw Error(ErrorCode::SizeMismatch, "negative vertex count");
}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges)
    : Graph(n)
{
    for (auto [i, j] : edges)
        add_edge(i, j);
}

void Graph::add_edge(int i, int j)
{
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
        throw Error(ErrorCode::SizeMismatch, "edge endpoint out of range");
    if (i == j)
        throw Error(ErrorCode::SizeMismatch, "loops are not allowed");
    if (adj_[i][j])
        throw Error(ErrorCode::SizeMismatch, "duplicate edge");
    adj_[i][j] = adj_[j][i] = 1;
}

std::vector<std::pair<int, int>> Graph::edges() const
{
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (adj_[i][j])
                out.emplace_back(i, j);
    return out;
}

int Graph::degree(int i) const
{
    int d = 0;
    for (int j = 0; j < n_; ++j)
        d += adj_[i][j];
    return d;
}

Graph Graph::complement() const
{
    Graph c(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (!adj_[i][j])
                c.add_edge(i, j);
    return c;
}

Graph complete_graph(int n)
{
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            g.add_edge(i, j);
    return g;
}

Graph path_graph(int n)
{
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i)
        g.add_edge(i, i + 1);
    return g;
}

QuantumGraph graph_operator_system(const Graph& g, Tolerance tol)
{
    const Index n = g.n();
    CMatrix q = CMatrix::Zero(n * n, n + 2 * static_cast<Index>(g.edges().size()));
    Index col = 0;
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            if (g.related(i, j))
                q(i * n + j, col++) = 1.0;
    return QuantumGraph::trusted(MatSubspace::from_orthonormal(n, n, q, tol), diagonal_algebra(n, tol));
}

TwinPartition true_twin_classes(const Graph& g)
{
    std::map<std::vector<char>, std::size_t> index;
    TwinPartition p;
    for (int x = 0; x < g.n(); ++x) {
        std::vector<char> closed(g.n());
        for (int y = 0; y < g.n(); ++y)
            closed[y] = g.related(x, y);
        auto it = index.find(closed);
        if (it == index.end()) {
            index.emplace(closed, p.classes.size());
            p.classes.push_back({x});
        } else {
            p.classes[it->second].push_back(x);
        }
    }
    return p;
}

std::pair<Graph, VertexMap> skeleton_graph(const Graph& g)
{
    TwinPartition p = true_twin_classes(g);
    const int k = static_cast<int>(p.classes.size());
    std::vector<int> image(g.n());
    for (int c = 0; c < k; ++c)
        for (int x : p.classes[c])
            image[x] = c;
    Graph s(k);
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            if (g.adjacent(p.classes[a].front(), p.classes[b].front()))
                s.add_edge(a, b);
    return {s, VertexMap{g, s, image}};
}

Graph clique_blowup(const Graph& g, const std::vector<int>& sizes) { return blowup_projection(g, sizes).source; }

VertexMap blowup_projection(const Graph& g, const std::vector<int>& sizes)
{
    if (static_cast<int>(sizes.size()) != g.n())
        throw Error(ErrorCode::SizeMismatch, "blow-up sizes must match the vertex count");
    std::vector<int> image;
    for (int v = 0; v < g.n(); ++v) {
        if (sizes[v] < 1)
            throw Error(ErrorCode::SizeMismatch, "blow-up sizes must be positive");
        image.insert(image.end(), sizes[v], v);
    }
    Graph b(static_cast<int>(image.size()));
    for (std::size_t x = 0; x < image.size(); ++x)
        for (std::size_t y = x + 1; y < image.size(); ++y)
            if (g.related(image[x], image[y]))
                b.add_edge(static_cast<int>(x), static_cast<int>(y));
    return VertexMap{b, g, image};
}

namespace {

// Joint colour refinement so that colours are comparable across both graphs.
std::vector<std::vector<int>> refine_colours(const Graph& g, const Graph& h)
{
    const Graph* gs[2] = {&g, &h};
    std::vector<std::vector<int>> col(2);
    for (int t = 0; t < 2; ++t)
        for (int v = 0; v < gs[t]->n(); ++v)
            col[t].push_back(gs[t]->degree(v));
    std::size_t classes = 0;
    while (true) {
        std::map<std::pair<int, std::vector<int>>, int> ids;
        std::vector<std::vector<int>> next(2);
        for (int t = 0; t < 2; ++t)
            for (int v = 0; v < gs[t]->n(); ++v) {
                std::vector<int> nb;
                for (int w = 0; w < gs[t]->n(); ++w)
                    if (gs[t]->adjacent(v, w))
                        nb.push_back(col[t][w]);
                std::sort(nb.begin(), nb.end());
                ids.emplace(std::make_pair(col[t][v], nb), 0);
            }
        int id = 0;
        for (auto& [key, val] : ids)
            val = id++;
        for (int t = 0; t < 2; ++t)
            for (int v = 0; v < gs[t]->n(); ++v) {
                std::vector<int> nb;
                for (int w = 0; w < gs[t]->n(); ++w)
                    if (gs[t]->adjacent(v, w))
                        nb.push_back(col[t][w]);
                std::sort(nb.begin(), nb.end());
                next[t].push_back(ids.at(std::make_pair(col[t][v], nb)));
            }
        col = std::move(next);
        if (ids.size() == classes)
            break;
        classes = ids.size();
    }
    return col;
}

bool extend_isomorphism(const Graph& g, const Graph& h, const std::vector<std::vector<int>>& col,
                        const std::vector<int>& order, std::size_t depth, std::vector<int>& map,
                        std::vector<char>& used)
{
    if (depth == order.size())
        return true;
    const int v = order[depth];
    for (int w = 0; w < h.n(); ++w) {
        if (used[w] || col[1][w] != col[0][v])
            continue;
        bool ok = true;
        for (std::size_t d = 0; d < depth && ok; ++d) {
            int u = order[d];
            ok = g.adjacent(u, v) == h.adjacent(map[u], w);
        }
        if (!ok)
            continue;
        map[v] = w;
        used[w] = 1;
        if (extend_isomorphism(g, h, col, order, depth + 1, map, used))
            return true;
        used[w] = 0;
    }
    return false;
}

} // namespace

std::optional<VertexMap> graph_isomorphism(const Graph& g, const Graph& h)
{
    if (g.n() != h.n() || g.edges().size() != h.edges().size())
        return std::nullopt;
    auto col = refine_colours(g, h);
    auto a = col[0];
    auto b = col[1];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b)
        return std::nullopt;
    // Place vertices of rare colours first.
    std::map<int, int> freq;
    for (int c : col[0])
        ++freq[c];
    std::vector<int> order(g.n());
    for (int v = 0; v < g.n(); ++v)
        order[v] = v;
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return freq[col[0][x]] < freq[col[0][y]]; });
    std::vector<int> map(g.n(), -1);
    std::vector<char> used(h.n(), 0);
    if (!extend_isomorphism(g, h, col, order, 0, map, used))
        return std::nullopt;
    return VertexMap{g, h, map};
}

PullbackMapCheck is_pullback_map(const VertexMap& f)
{
    const Graph& g = f.source;
    const Graph& h = f.target;
    if (static_cast<int>(f.image.size()) != g.n())
        throw Error(ErrorCode::SizeMismatch, "vertex map length differs from source size");
    for (int x : f.image)
        if (x < 0 || x >= h.n())
            throw Error(ErrorCode::SizeMismatch, "vertex map image out of range");
    bool pb = true;
    for (int x = 0; x < g.n() && pb; ++x)
        for (int y = 0; y < g.n() && pb; ++y)
            pb = g.related(x, y) == h.related(f.image[x], f.image[y]);
    std::vector<char> hit(h.n(), 0);
    for (int x : f.image)
        hit[x] = 1;
    bool surj = std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
    return {pb, pb && surj};
}

KrausMap canonical_pullback_channel(const VertexMap& f, Tolerance tol)
{
    if (!is_pullback_map(f).is_pullback)
        throw Error(ErrorCode::NotPullback, "vertex map is not a pullback map");
    const Index h = f.target.n();
    const Index g = f.source.n();
    std::vector<CMatrix> kraus;
    for (Index i = 0; i < g; ++i)
        kraus.push_back(matrix_unit(h, g, f.image[i], i));
    return make_kraus_map(std::move(kraus), diagonal_algebra(h, tol), diagonal_algebra(g, tol));
}

namespace {

using Bits = std::uint64_t;

class CliqueSearch {
public:
    CliqueSearch(const Graph& g, std::uint64_t budget)
        : n_(g.n())
        , budget_(budget)
        , nbr_(g.n(), 0)
    {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (g.adjacent(i, j))
                    nbr_[i] |= Bits(1) << j;
    }

    int run()
    {
        Bits all = n_ == 64 ? ~Bits(0) : (Bits(1) << n_) - 1;
        expand(all, 0);
        return best_;
    }

private:
    void expand(Bits cand, int size)
    {
        if (++nodes_ > budget_)
            throw Error(ErrorCode::BudgetExceeded, "clique search exceeded its node budget");
        if (cand == 0) {
            best_ = std::max(best_, size);
            return;
        }
        // Greedy colouring bound.
        if (size + colour_bound(cand) <= best_)
            return;
        while (cand) {
            if (size + __builtin_popcountll(cand) <= best_)
                return;
            int v = __builtin_ctzll(cand);
            expand(cand & nbr_[v], size + 1);
            cand &= ~(Bits(1) << v);
        }
    }

    int colour_bound(Bits cand) const
    {
        int colours = 0;
        while (cand) {
            ++colours;
            Bits avail = cand;
            while (avail) {
                int v = __builtin_ctzll(avail);
                avail &= ~(Bits(1) << v);
                avail &= ~nbr_[v];
                cand &= ~(Bits(1) << v);
            }
        }
        return colours;
    }

    int n_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::vector<Bits> nbr_;
    int best_ = 0;
};

void require_small(const Graph& g)
{
    if (g.n() > 30)
        throw Error(ErrorCode::BudgetExceeded, "exact parameters are limited to 30 vertices");
}

class Colouring {
public:
    Colouring(const Graph& g, std::uint64_t budget)
        : g_(g)
        , budget_(budget)
        , colour_(g.n(), -1)
    {
    }

    bool colourable(int k)
    {
        std::fill(colour_.begin(), colour_.end(), -1);
        k_ = k;
        return place(0);
    }

private:
    bool place(int done)
    {
        if (++nodes_ > budget_)
            throw Error(ErrorCode::BudgetExceeded, "colouring search exceeded its node budget");
        if (done == g_.n())
            return true;
        // DSATUR choice: most distinct neighbour colours, then highest degree.
        int pick = -1;
        int best_sat = -1;
        int best_deg = -1;
        for (int v = 0; v < g_.n(); ++v) {
            if (colour_[v] >= 0)
                continue;
            std::uint64_t seen = 0;
            for (int w = 0; w < g_.n(); ++w)
                if (g_.adjacent(v, w) && colour_[w] >= 0)
                    seen |= std::uint64_t(1) << colour_[w];
            int sat = __builtin_popcountll(seen);
            int deg = g_.degree(v);
            if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
                pick = v;
                best_sat = sat;
                best_deg = deg;
            }
        }
        int used = 0;
        for (int c : colour_)
            used = std::max(used, c + 1);
        for (int c = 0; c < std::min(k_, used + 1); ++c) {
            bool ok = true;
            for (int w = 0; w < g_.n() && ok; ++w)
                ok = !(g_.adjacent(pick, w) && colour_[w] == c);
            if (!ok)
                continue;
            colour_[pick] = c;
            if (place(done + 1))
                return true;
            colour_[pick] = -1;
        }
        return false;
    }

    const Graph& g_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::vector<int> colour_;
    int k_ = 0;
};

} // namespace

int clique_number(const Graph& g, std::uint64_t node_budget)
{
    require_small(g);
    if (g.n() == 0)
        return 0;
    return CliqueSearch(g, node_budget).run();
}

int independence_number(const Graph& g, std::uint64_t node_budget)
{
    require_small(g);
    return clique_number(g.complement(), node_budget);
}

int chromatic_number(const Graph& g, std::uint64_t node_budget)
{
    require_small(g);
    if (g.n() == 0)
        return 0;
    Colouring c(g, node_budget);
    for (int k = clique_number(g, node_budget); k <= g.n(); ++k)
        if (c.colourable(k))
            return k;
    return g.n();
}

bool is_connected_graph(const Graph& g)
{
    if (g.n() == 0)
        return true;
    std::vector<char> seen(g.n(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w = 0; w < g.n(); ++w)
            if (g.adjacent(v, w) && !seen[w]) {
                seen[w] = 1;
                ++count;
                q.push(w);
            }
    }
    return count == g.n();
}

ClassicalTroResult tro_equivalent_graphs(const Graph& g, const Graph& h)
{
    auto [gs, qg] = skeleton_graph(g);
    auto [hs, qh] = skeleton_graph(h);
    auto iso = graph_isomorphism(gs, hs);
    if (!iso)
        return {false, std::nullopt};
    return {true, ClassicalTroWitness{qg, qh, *iso}};
}

CMatrix permutation_matrix(const std::vector<int>& image)
{
    const Index n = static_cast<Index>(image.size());
    CMatrix p = CMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        p(image[i], i) = 1.0;
    return p;
}

Graph strong_product(const Graph& g, const Graph& h)
{
    Graph p(g.n() * h.n());
    for (int a = 0; a < g.n(); ++a)
        for (int b = 0; b < h.n(); ++b)
            for (int c = 0; c < g.n(); ++c)
                for (int d = 0; d < h.n(); ++d) {
                    int x = a * h.n() + b;
                    int y = c * h.n() + d;
                    if (x < y && g.related(a, c) && h.related(b, d))
                        p.add_edge(x, y);
                }
    return p;
}

} // namespace qgraph
