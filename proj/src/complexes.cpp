#include <jester/complexes.hpp>

#include <boost/rational.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <unordered_set>

namespace jester::complexes {

bool is_face(const Simplex& face, const Simplex& of)
{
    return std::includes(of.begin(), of.end(), face.begin(), face.end());
}

std::set<Simplex> face_closure(const std::vector<Simplex>& simplices)
{
    std::set<Simplex> out;
    for (const auto& s : simplices) {
        const std::size_t n = s.size();
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            Simplex f;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1u << i))
                    f.push_back(s[i]);
            out.insert(std::move(f));
        }
    }
    return out;
}

SimplicialComplex::SimplicialComplex(std::vector<std::string> vertices, std::set<Simplex> simplices)
    : vertices_(std::move(vertices)), simplices_(std::move(simplices))
{
    std::set<std::string> names(vertices_.begin(), vertices_.end());
    if (names.size() != vertices_.size())
        throw MalformedComplex("duplicate vertex name");
    const int nv = static_cast<int>(vertices_.size());
    for (const auto& s : simplices_) {
        if (s.empty() || static_cast<int>(s.size()) > max_dimension + 1)
            throw MalformedComplex("simplex with " + std::to_string(s.size()) + " vertices");
        if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
            throw MalformedComplex("simplex lists a vertex twice or is not sorted");
        if (s.front() < 0 || s.back() >= nv)
            throw MalformedComplex("simplex uses an unknown vertex");
    }
    for (const auto& s : simplices_)
        if (s.size() > 1)
            for (std::size_t i = 0; i < s.size(); ++i) {
                Simplex f = s;
                f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
                if (!simplices_.contains(f))
                    throw MalformedComplex("not closed under faces");
            }
}

SimplicialComplex SimplicialComplex::from_maximal(std::vector<std::string> vertices, const std::vector<Simplex>& simplices)
{
    std::vector<Simplex> sorted;
    sorted.reserve(simplices.size() + vertices.size());
    for (auto s : simplices) {
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw MalformedComplex("simplex lists a vertex twice");
        sorted.push_back(std::move(s));
    }
    for (int v = 0; v < static_cast<int>(vertices.size()); ++v)
        sorted.push_back({v});
    return {std::move(vertices), face_closure(sorted)};
}

SimplicialComplex SimplicialComplex::from_named(std::vector<std::string> vertices,
                                                const std::vector<std::vector<std::string>>& simplices)
{
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        index.emplace(vertices[i], static_cast<int>(i));
    std::vector<Simplex> raw;
    for (const auto& s : simplices) {
        Simplex t;
        for (const auto& n : s) {
            auto it = index.find(n);
            if (it == index.end())
                throw MalformedComplex("unknown vertex '" + n + "'");
            t.push_back(it->second);
        }
        raw.push_back(std::move(t));
    }
    return from_maximal(std::move(vertices), raw);
}

int SimplicialComplex::dimension() const
{
    int d = -1;
    for (const auto& s : simplices_)
        d = std::max(d, complexes::dimension(s));
    return d;
}

std::vector<std::size_t> SimplicialComplex::counts_by_dimension() const
{
    std::vector<std::size_t> out(static_cast<std::size_t>(std::max(dimension() + 1, 0)), 0);
    for (const auto& s : simplices_)
        ++out[s.size() - 1];
    return out;
}

std::vector<Simplex> SimplicialComplex::maximal_simplices() const
{
    std::set<Simplex> non_maximal;
    for (const auto& s : simplices_)
        if (s.size() > 1)
            for (std::size_t i = 0; i < s.size(); ++i) {
                Simplex f = s;
                f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
                non_maximal.insert(std::move(f));
            }
    std::vector<Simplex> out;
    for (const auto& s : simplices_)
        if (!non_maximal.contains(s))
            out.push_back(s);
    return out;
}

int SimplicialComplex::vertex_index(const std::string& name) const
{
    auto it = std::find(vertices_.begin(), vertices_.end(), name);
    if (it == vertices_.end())
        throw MalformedComplex("unknown vertex '" + name + "'");
    return static_cast<int>(it - vertices_.begin());
}

std::vector<std::string> SimplicialComplex::names(const Simplex& s) const
{
    std::vector<std::string> out;
    for (int v : s)
        out.push_back(vertices_.at(static_cast<std::size_t>(v)));
    return out;
}

Simplex SimplicialComplex::simplex(const std::vector<std::string>& names) const
{
    Simplex s;
    for (const auto& n : names)
        s.push_back(vertex_index(n));
    std::sort(s.begin(), s.end());
    return s;
}

SimplicialComplex SimplicialComplex::with_simplices(std::set<Simplex> simplices) const
{
    return {vertices_, std::move(simplices)};
}

bool SimplicialComplex::is_connected() const
{
    std::vector<int> parent(vertices_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x)
            x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    std::set<int> used;
    for (const auto& s : simplices_) {
        used.insert(s.front());
        for (int v : s)
            parent[static_cast<std::size_t>(find(v))] = find(s.front());
    }
    std::set<int> roots;
    for (int v : used)
        roots.insert(find(v));
    return roots.size() <= 1;
}

long euler_characteristic(const SimplicialComplex& k)
{
    long chi = 0;
    for (const auto& s : k.simplices())
        chi += (s.size() % 2 == 1) ? 1 : -1;
    return chi;
}

// ---------------------------------------------------------------------------

namespace {

/// Index-based view of a complex for fast repeated collapsing.
struct Incidence {
    std::vector<Simplex> simplex;
    std::vector<std::vector<int>> faces;    // immediate faces
    std::vector<std::vector<int>> cofaces;  // immediate cofaces

    explicit Incidence(const SimplicialComplex& k)
    {
        std::map<Simplex, int> index;
        for (const auto& s : k.simplices()) {
            index.emplace(s, static_cast<int>(simplex.size()));
            simplex.push_back(s);
        }
        faces.resize(simplex.size());
        cofaces.resize(simplex.size());
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            const auto& s = simplex[i];
            if (s.size() < 2)
                continue;
            for (std::size_t j = 0; j < s.size(); ++j) {
                Simplex f = s;
                f.erase(f.begin() + static_cast<std::ptrdiff_t>(j));
                const int fi = index.at(f);
                faces[i].push_back(fi);
                cofaces[static_cast<std::size_t>(fi)].push_back(static_cast<int>(i));
            }
        }
    }
    std::size_t size() const { return simplex.size(); }
};

struct State {
    std::vector<std::uint64_t> alive;
    std::vector<int> live_cofaces;
    std::size_t alive_count = 0;

    explicit State(const Incidence& inc)
        : alive((inc.size() + 63) / 64, 0), live_cofaces(inc.size()), alive_count(inc.size())
    {
        for (std::size_t i = 0; i < inc.size(); ++i) {
            alive[i / 64] |= std::uint64_t{1} << (i % 64);
            live_cofaces[i] = static_cast<int>(inc.cofaces[i].size());
        }
    }
    bool is_alive(int i) const { return (alive[static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1u; }
    void kill(int i) { alive[static_cast<std::size_t>(i) / 64] &= ~(std::uint64_t{1} << (i % 64)); }
};

std::vector<std::pair<int, int>> free_pairs(const Incidence& inc, const State& st)
{
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < static_cast<int>(inc.size()); ++i) {
        if (!st.is_alive(i) || st.live_cofaces[static_cast<std::size_t>(i)] != 1)
            continue;
        for (int c : inc.cofaces[static_cast<std::size_t>(i)])
            if (st.is_alive(c)) {
                if (st.live_cofaces[static_cast<std::size_t>(c)] == 0)
                    out.emplace_back(i, c);
                break;
            }
    }
    return out;
}

void collapse(const Incidence& inc, State& st, int face, int coface)
{
    st.kill(face);
    st.kill(coface);
    st.alive_count -= 2;
    for (int f : inc.faces[static_cast<std::size_t>(coface)])
        --st.live_cofaces[static_cast<std::size_t>(f)];
    for (int f : inc.faces[static_cast<std::size_t>(face)])
        --st.live_cofaces[static_cast<std::size_t>(f)];
}

struct BitsHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const
    {
        std::size_t h = 0xcbf29ce484222325ull;
        for (auto w : v)
            h = (h ^ std::hash<std::uint64_t>{}(w)) * 0x100000001b3ull;
        return h;
    }
};

class Search {
public:
    Search(const Incidence& inc, const CollapseOptions& opt) : inc_(inc), opt_(opt) {}

    std::uint64_t states() const { return states_; }
    bool out_of_budget() const { return states_ >= opt_.budget; }

    std::optional<std::vector<std::pair<int, int>>> greedy(std::mt19937_64& rng)
    {
        State st(inc_);
        std::vector<std::pair<int, int>> steps;
        while (st.alive_count > 1) {
            if (out_of_budget())
                return std::nullopt;
            ++states_;
            auto fp = free_pairs(inc_, st);
            if (fp.empty())
                return std::nullopt;
            auto pick = fp[std::uniform_int_distribution<std::size_t>(0, fp.size() - 1)(rng)];
            collapse(inc_, st, pick.first, pick.second);
            steps.push_back(pick);
        }
        return steps;
    }

    /// Returns true when a full sequence was found; `exhausted_` stays true
    /// only if every reachable state was examined.
    bool dfs(State& st, std::vector<std::pair<int, int>>& steps)
    {
        if (st.alive_count == 1)
            return true;
        if (!visited_.insert(st.alive).second)
            return false;
        if (out_of_budget()) {
            exhausted_ = false;
            return false;
        }
        ++states_;
        for (auto [f, c] : free_pairs(inc_, st)) {
            State next = st;
            collapse(inc_, next, f, c);
            steps.emplace_back(f, c);
            if (dfs(next, steps))
                return true;
            steps.pop_back();
            if (!exhausted_)
                return false;
        }
        return false;
    }

    bool exhausted() const { return exhausted_; }

private:
    const Incidence& inc_;
    const CollapseOptions& opt_;
    std::uint64_t states_ = 0;
    bool exhausted_ = true;
    std::unordered_set<std::vector<std::uint64_t>, BitsHash> visited_;
};

CollapseSequence to_sequence(const Incidence& inc, const std::vector<std::pair<int, int>>& steps)
{
    CollapseSequence s;
    for (auto [f, c] : steps)
        s.steps.push_back({inc.simplex[static_cast<std::size_t>(f)], inc.simplex[static_cast<std::size_t>(c)]});
    return s;
}

} // namespace

std::vector<FreePair> free_faces(const SimplicialComplex& k)
{
    const Incidence inc(k);
    const State st(inc);
    std::vector<FreePair> out;
    for (auto [f, c] : free_pairs(inc, st))
        out.push_back({inc.simplex[static_cast<std::size_t>(f)], inc.simplex[static_cast<std::size_t>(c)]});
    return out;
}

SimplicialComplex elementary_collapse(const SimplicialComplex& k, const Simplex& face, const Simplex& coface)
{
    if (!k.contains(face) || !k.contains(coface) || coface.size() != face.size() + 1 || !is_face(face, coface))
        throw NotFreePair("not a face/coface pair of the complex");
    for (const auto& s : k.simplices())
        if (s != face && s != coface && is_face(face, s))
            throw NotFreePair("face also lies in another simplex");
    auto rest = k.simplices();
    rest.erase(face);
    rest.erase(coface);
    return k.with_simplices(std::move(rest));
}

bool verify_collapse_sequence(const SimplicialComplex& k, const CollapseSequence& s)
{
    SimplicialComplex cur = k;
    for (const auto& step : s.steps) {
        try {
            cur = elementary_collapse(cur, step.face, step.coface);
        } catch (const NotFreePair&) {
            return false;
        }
    }
    return cur.size() == 1;
}

std::string to_string(CollapseResult::Verdict v)
{
    switch (v) {
    case CollapseResult::Verdict::collapsible: return "collapsible";
    case CollapseResult::Verdict::not_collapsible: return "not_collapsible";
    case CollapseResult::Verdict::budget_exceeded: return "budget_exceeded";
    }
    return "?";
}

std::string to_string(CollapseResult::Reason r)
{
    switch (r) {
    case CollapseResult::Reason::none: return "none";
    case CollapseResult::Reason::no_free_face: return "no free face";
    case CollapseResult::Reason::euler_characteristic: return "euler characteristic is not 1";
    case CollapseResult::Reason::disconnected: return "disconnected";
    case CollapseResult::Reason::exhausted: return "search exhausted";
    }
    return "?";
}

CollapseResult is_collapsible(const SimplicialComplex& k, const CollapseOptions& options)
{
    if (k.empty())
        throw EmptyComplex("collapsibility of the empty complex is undefined");
    CollapseResult out;
    auto refuse = [&](CollapseResult::Reason r) {
        out.verdict = CollapseResult::Verdict::not_collapsible;
        out.reason = r;
        return out;
    };
    if (k.size() == 1) {
        out.verdict = CollapseResult::Verdict::collapsible;
        out.sequence = CollapseSequence{};
        return out;
    }
    if (!k.is_connected())
        return refuse(CollapseResult::Reason::disconnected);
    if (euler_characteristic(k) != 1)
        return refuse(CollapseResult::Reason::euler_characteristic);

    const Incidence inc(k);
    if (free_pairs(inc, State(inc)).empty())
        return refuse(CollapseResult::Reason::no_free_face);

    Search search(inc, options);
    std::mt19937_64 rng(options.seed);
    for (unsigned r = 0; r < options.greedy_restarts && !search.out_of_budget(); ++r)
        if (auto steps = search.greedy(rng)) {
            out.verdict = CollapseResult::Verdict::collapsible;
            out.sequence = to_sequence(inc, *steps);
            out.states = search.states();
            return out;
        }

    State root(inc);
    std::vector<std::pair<int, int>> steps;
    const bool found = search.dfs(root, steps);
    out.states = search.states();
    if (found) {
        out.verdict = CollapseResult::Verdict::collapsible;
        out.sequence = to_sequence(inc, steps);
        return out;
    }
    if (search.exhausted())
        return refuse(CollapseResult::Reason::exhausted);
    out.verdict = CollapseResult::Verdict::budget_exceeded;
    return out;
}

bool SplitReport::all_collapsible() const
{
    using V = CollapseResult::Verdict;
    return union_ok && a_result.verdict == V::collapsible && b_result.verdict == V::collapsible &&
           c_result.verdict == V::collapsible;
}

SplitReport split_check(const SimplicialComplex& k, const std::vector<Simplex>& a, const std::vector<Simplex>& b,
                        const CollapseOptions& options)
{
    auto close = [&](const std::vector<Simplex>& list) {
        std::vector<Simplex> sorted;
        for (auto s : list) {
            std::sort(s.begin(), s.end());
            if (!k.contains(s))
                throw NotSubcomplex("simplex is not in the complex");
            sorted.push_back(std::move(s));
        }
        return k.with_simplices(face_closure(sorted));
    };
    SplitReport r;
    r.a = close(a);
    r.b = close(b);
    std::set<Simplex> both;
    std::set<Simplex> either = r.a.simplices();
    for (const auto& s : r.b.simplices()) {
        either.insert(s);
        if (r.a.contains(s))
            both.insert(s);
    }
    r.union_ok = either == k.simplices();
    r.c = k.with_simplices(std::move(both));
    auto run = [&](const SimplicialComplex& x) {
        if (x.empty()) {
            CollapseResult e;
            e.verdict = CollapseResult::Verdict::not_collapsible;
            e.reason = CollapseResult::Reason::disconnected;
            return e;
        }
        return is_collapsible(x, options);
    };
    r.a_result = run(r.a);
    r.b_result = run(r.b);
    r.c_result = run(r.c);
    return r;
}

// ---------------------------------------------------------------------------
// Polygon builder

namespace {

using Rational = boost::rational<long long>;
/// Formal convex combination of level-0 vertices (0 = cone point, 1.. = boundary).
using Coord = std::map<int, Rational>;

struct Level {
    std::vector<Coord> coords;
    std::vector<std::array<int, 3>> triangles;
    std::vector<int> sector;
};

Level subdivide(const Level& in)
{
    Level out;
    std::map<Coord, int> index;
    auto vertex = [&](const Coord& c) {
        auto [it, fresh] = index.emplace(c, static_cast<int>(out.coords.size()));
        if (fresh)
            out.coords.push_back(c);
        return it->second;
    };
    auto bary = [&](std::initializer_list<int> vs) {
        Coord c;
        const Rational w(1, static_cast<long long>(vs.size()));
        for (int v : vs)
            for (const auto& [k, x] : in.coords[static_cast<std::size_t>(v)])
                c[k] += x * w;
        return vertex(c);
    };
    for (std::size_t t = 0; t < in.triangles.size(); ++t) {
        std::array<int, 3> p = in.triangles[t];
        std::sort(p.begin(), p.end());
        do {
            out.triangles.push_back({bary({p[0]}), bary({p[0], p[1]}), bary({p[0], p[1], p[2]})});
            out.sector.push_back(in.sector[t]);
        } while (std::next_permutation(p.begin(), p.end()));
    }
    return out;
}

std::string rational_name(const Rational& r)
{
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

} // namespace

PolygonComplex polygon_identification_complex(const IdentificationPolygon& p)
{
    const auto& word = p.word;
    const int n = static_cast<int>(word.size());
    if (n == 0)
        throw DegenerateWord("the identification word is empty");
    for (const auto& s : word) {
        if (s.label.empty())
            throw DegenerateWord("side with an empty label");
        if (s.direction != 1 && s.direction != -1)
            throw DegenerateWord("side direction must be +1 or -1");
    }
    // Short words get each side split so the cone is over at least 3 segments.
    const int per_side = n >= 3 ? 1 : (n == 2 ? 2 : 3);
    const int m = n * per_side;

    Level level;
    level.coords.push_back({{0, Rational(1)}});
    for (int j = 0; j < m; ++j)
        level.coords.push_back({{j + 1, Rational(1)}});
    for (int j = 0; j < m; ++j) {
        level.triangles.push_back({0, j + 1, (j + 1) % m + 1});
        level.sector.push_back(j);
    }
    level = subdivide(subdivide(level));

    // Union-find over subdivided vertices plus one node per (label, parameter).
    const int nv = static_cast<int>(level.coords.size());
    std::map<std::pair<std::string, Rational>, int> label_node;
    std::vector<int> parent(static_cast<std::size_t>(nv));
    std::iota(parent.begin(), parent.end(), 0);
    auto node = [&](const std::string& label, Rational t) {
        auto [it, fresh] = label_node.emplace(std::make_pair(label, t), static_cast<int>(parent.size()));
        if (fresh)
            parent.push_back(it->second);
        return it->second;
    };
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x)
            x = parent[static_cast<std::size_t>(x)];
        return x;
    };
    auto unite = [&](int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); };
    auto side_point = [&](int side, Rational t) {
        const auto& s = word[static_cast<std::size_t>(side)];
        return node(s.label, s.direction > 0 ? t : Rational(1) - t);
    };

    // Boundary position of each vertex: (segment j, weight toward j + 1), if any.
    struct Boundary {
        int segment;
        Rational toward_next;
    };
    std::vector<std::optional<Boundary>> boundary(static_cast<std::size_t>(nv));
    for (int v = 0; v < nv; ++v) {
        const Coord& c = level.coords[static_cast<std::size_t>(v)];
        if (c.contains(0))
            continue;
        std::vector<int> support;
        for (const auto& [k, x] : c)
            support.push_back(k - 1);
        Boundary b{};
        if (support.size() == 1) {
            b = {support[0], Rational(0)};
        } else {
            const int lo = support[0];
            const int hi = support[1];
            if (hi == lo + 1)
                b = {lo, c.at(hi + 1)};
            else  // wraps around: segment m-1 runs from boundary vertex m-1 to 0
                b = {hi, c.at(lo + 1)};
        }
        boundary[static_cast<std::size_t>(v)] = b;
        const int side = b.segment / per_side;
        const Rational t = (Rational(b.segment % per_side) + b.toward_next) / Rational(per_side);
        unite(v, side_point(side, t));
        if (t == Rational(0))
            unite(v, side_point((side + n - 1) % n, Rational(1)));
    }

    // Name the identified vertices.
    std::map<int, std::string> class_name;
    for (int j = 0; j < m; j += per_side) {
        const int corner = j / per_side;
        const int root = find(j + 1);
        class_name.emplace(root, "c" + std::to_string(corner));
    }
    for (const auto& [key, id] : label_node) {
        const int root = find(id);
        if (!class_name.contains(root))
            class_name.emplace(root, key.first + "(" + rational_name(key.second) + ")");
    }
    int interior = 0;
    for (int v = 0; v < nv; ++v) {
        const int root = find(v);
        if (class_name.contains(root))
            continue;
        if (level.coords[static_cast<std::size_t>(v)].size() == 1)
            class_name.emplace(root, "o");
        else
            class_name.emplace(root, "p" + std::to_string(interior++));
    }
    // Vertex order: corners, side points, cone point, interior points.
    std::vector<std::pair<std::string, int>> order;
    for (const auto& [root, name] : class_name)
        order.emplace_back(name, root);
    auto rank = [](const std::string& s) {
        if (s.size() > 1 && s[0] == 'c' && std::isdigit(static_cast<unsigned char>(s[1])))
            return 0;
        if (s.find('(') != std::string::npos)
            return 1;
        if (s == "o")
            return 2;
        return 3;
    };
    auto numeric_tail = [](const std::string& s) { return std::stol(s.substr(1)); };
    std::sort(order.begin(), order.end(), [&](const auto& x, const auto& y) {
        const int rx = rank(x.first);
        const int ry = rank(y.first);
        if (rx != ry)
            return rx < ry;
        if (rx == 0 || rx == 3)
            return numeric_tail(x.first) < numeric_tail(y.first);
        return x.first < y.first;
    });
    std::vector<std::string> names;
    std::map<int, int> root_index;
    for (const auto& [name, root] : order) {
        root_index.emplace(root, static_cast<int>(names.size()));
        names.push_back(name);
    }
    auto final_index = [&](int v) { return root_index.at(find(v)); };

    // Identify and re-verify simplicial-ness.
    PolygonComplex out;
    std::set<Simplex> seen_triangles;
    for (std::size_t t = 0; t < level.triangles.size(); ++t) {
        const auto& tri = level.triangles[t];
        Simplex s{final_index(tri[0]), final_index(tri[1]), final_index(tri[2])};
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw NonSimplicial("identification collapses a triangle onto an edge");
        if (!seen_triangles.insert(s).second)
            throw NonSimplicial("two triangles are identified with each other");
        // Half sector: which end of the boundary segment the triangle leans to.
        const int j = level.sector[t];
        Rational near_start(0);
        Rational near_end(0);
        for (int v : tri) {
            const Coord& c = level.coords[static_cast<std::size_t>(v)];
            if (auto it = c.find(j + 1); it != c.end())
                near_start += it->second;
            if (auto it = c.find((j + 1) % m + 1); it != c.end())
                near_end += it->second;
        }
        out.triangles.push_back(s);
        out.half_sector.push_back(2 * j + (near_start > near_end ? 0 : 1));
    }
    // Multi-edge check: distinct edge classes must stay distinct.
    std::set<std::pair<int, int>> raw_classes;
    std::set<std::tuple<std::string, Rational, Rational>> boundary_classes;
    std::set<std::pair<int, int>> identified_edges;
    for (const auto& tri : level.triangles)
        for (int i = 0; i < 3; ++i) {
            const int u = tri[static_cast<std::size_t>(i)];
            const int v = tri[static_cast<std::size_t>((i + 1) % 3)];
            const auto& bu = boundary[static_cast<std::size_t>(u)];
            const auto& bv = boundary[static_cast<std::size_t>(v)];
            const int fu = final_index(u);
            const int fv = final_index(v);
            identified_edges.emplace(std::min(fu, fv), std::max(fu, fv));
            if (bu && bv) {
                // Both ends on the boundary: the edge lies along one side.
                const int seg = (bu->toward_next == Rational(0) && bv->segment != bu->segment) ? bv->segment : bu->segment;
                const int side = seg / per_side;
                auto param = [&](const Boundary& b) {
                    Rational t = (Rational(b.segment % per_side) + b.toward_next) / Rational(per_side);
                    if (b.segment / per_side != side)
                        t = Rational(1);  // start corner of the following side
                    const auto& sd = word[static_cast<std::size_t>(side)];
                    return sd.direction > 0 ? t : Rational(1) - t;
                };
                Rational a = param(*bu);
                Rational b = param(*bv);
                if (b < a)
                    std::swap(a, b);
                boundary_classes.emplace(word[static_cast<std::size_t>(side)].label, a, b);
            } else {
                raw_classes.emplace(std::min(u, v), std::max(u, v));
            }
        }
    if (identified_edges.size() != raw_classes.size() + boundary_classes.size())
        throw NonSimplicial("identification creates a multi-edge");

    out.complex = SimplicialComplex::from_maximal(std::move(names), out.triangles);
    out.half_sector_count = static_cast<std::size_t>(2 * m);
    return out;
}

std::vector<Simplex> sector_range(const PolygonComplex& pc, std::size_t first, std::size_t length)
{
    std::vector<Simplex> out;
    const std::size_t h = pc.half_sector_count;
    for (std::size_t t = 0; t < pc.triangles.size(); ++t) {
        const std::size_t hs = static_cast<std::size_t>(pc.half_sector[t]);
        if ((hs + h - first % h) % h < length)
            out.push_back(pc.triangles[t]);
    }
    return out;
}

std::vector<SectorSplit> search_sector_splits(const PolygonComplex& pc, const CollapseOptions& options)
{
    std::vector<SectorSplit> out;
    const std::size_t h = pc.half_sector_count;
    for (std::size_t first = 0; first < h; ++first)
        for (std::size_t length = 1; length < h; ++length) {
            auto a = sector_range(pc, first, length);
            auto b = sector_range(pc, (first + length) % h, h - length);
            SplitReport r = split_check(pc.complex, a, b, options);
            if (r.all_collapsible())
                out.push_back({first, length, std::move(r)});
        }
    return out;
}

} // namespace jester::complexes
