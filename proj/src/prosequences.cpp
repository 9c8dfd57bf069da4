#include <jester/prosequences.hpp>

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <set>

namespace jester::pro {

// ---------------------------------------------------------------------------
// Finite groups

FiniteGroup::FiniteGroup(std::string label, Table table) : label_(std::move(label)), table_(std::move(table))
{
    const auto n = table_.size();
    if (n == 0)
        throw MalformedGroup("'" + label_ + "': empty table");
    for (const auto& row : table_) {
        if (row.size() != n)
            throw MalformedGroup("'" + label_ + "': table is not square");
        for (int x : row)
            if (x < 0 || static_cast<std::size_t>(x) >= n)
                throw MalformedGroup("'" + label_ + "': entry " + std::to_string(x) + " out of range");
    }
    const int order = static_cast<int>(n);
    identity_ = -1;
    for (int e = 0; e < order && identity_ < 0; ++e) {
        bool ok = true;
        for (int x = 0; x < order && ok; ++x)
            ok = multiply(e, x) == x && multiply(x, e) == x;
        if (ok)
            identity_ = e;
    }
    if (identity_ < 0)
        throw MalformedGroup("'" + label_ + "': no identity element");
    for (int a = 0; a < order; ++a)
        for (int b = 0; b < order; ++b)
            for (int c = 0; c < order; ++c)
                if (multiply(multiply(a, b), c) != multiply(a, multiply(b, c)))
                    throw MalformedGroup("'" + label_ + "': not associative at (" + std::to_string(a) + ", " +
                                         std::to_string(b) + ", " + std::to_string(c) + ")");
    inverse_.assign(n, -1);
    element_order_.assign(n, 0);
    for (int a = 0; a < order; ++a) {
        for (int b = 0; b < order; ++b)
            if (multiply(a, b) == identity_) {
                inverse_[static_cast<std::size_t>(a)] = b;
                break;
            }
        if (inverse_[static_cast<std::size_t>(a)] < 0)
            throw MalformedGroup("'" + label_ + "': element " + std::to_string(a) + " has no inverse");
        int k = 1;
        for (int x = a; x != identity_; x = multiply(x, a))
            ++k;
        element_order_[static_cast<std::size_t>(a)] = k;
    }
}

FiniteGroup FiniteGroup::cyclic(int n, std::string label)
{
    if (n < 1)
        throw MalformedGroup("cyclic group of order " + std::to_string(n));
    Table t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
    return {label.empty() ? "Z" + std::to_string(n) : std::move(label), std::move(t)};
}

FiniteGroup FiniteGroup::product(const FiniteGroup& g, const FiniteGroup& h, std::string label)
{
    const int m = h.order();
    const int n = g.order() * m;
    Table t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            t[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
                g.multiply(x / m, y / m) * m + h.multiply(x % m, y % m);
    return {label.empty() ? g.label() + "x" + h.label() : std::move(label), std::move(t)};
}

FiniteGroup FiniteGroup::symmetric3(std::string label)
{
    std::vector<std::array<int, 3>> perms;
    std::array<int, 3> p{0, 1, 2};
    do
        perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    Table t(6, std::vector<int>(6));
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b) {
            std::array<int, 3> c{};
            for (std::size_t i = 0; i < 3; ++i)
                c[i] = perms[a][static_cast<std::size_t>(perms[b][i])];
            t[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
        }
    return {std::move(label), std::move(t)};
}

bool FiniteGroup::is_abelian() const
{
    for (int a = 0; a < order(); ++a)
        for (int b = 0; b < a; ++b)
            if (multiply(a, b) != multiply(b, a))
                return false;
    return true;
}

namespace {

std::vector<int> closure(const FiniteGroup& g, const std::vector<int>& gens)
{
    std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
    std::vector<int> out{g.identity()};
    seen[static_cast<std::size_t>(g.identity())] = 1;
    for (std::size_t i = 0; i < out.size(); ++i)
        for (int s : gens) {
            const int y = g.multiply(out[i], s);
            if (!seen[static_cast<std::size_t>(y)]) {
                seen[static_cast<std::size_t>(y)] = 1;
                out.push_back(y);
            }
        }
    return out;
}

void check_order(const FiniteGroup& g)
{
    if (g.order() > max_isomorphism_order)
        throw OrderTooLarge("'" + g.label() + "' has order " + std::to_string(g.order()) + " > " +
                            std::to_string(max_isomorphism_order));
}

/// Backtracking over images of the generators of g. Each partial choice is
/// extended along the Cayley graph of the generated subgroup; an
/// inconsistent edge prunes the branch.
void search_maps(const FiniteGroup& g, const FiniteGroup& h, bool injective,
                 const std::function<bool(const GroupMap&)>& emit)
{
    const std::vector<int> gens = g.generators();
    std::vector<int> images(gens.size(), 0);
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        // Extend along the subgroup generated by gens[0..i).
        GroupMap m(static_cast<std::size_t>(g.order()), -1);
        std::vector<char> used(static_cast<std::size_t>(h.order()), 0);
        m[static_cast<std::size_t>(g.identity())] = h.identity();
        used[static_cast<std::size_t>(h.identity())] = 1;
        std::vector<int> queue{g.identity()};
        for (std::size_t q = 0; q < queue.size(); ++q)
            for (std::size_t t = 0; t < i; ++t) {
                const int x = queue[q];
                const int y = g.multiply(x, gens[t]);
                const int fy = h.multiply(m[static_cast<std::size_t>(x)], images[t]);
                int& slot = m[static_cast<std::size_t>(y)];
                if (slot < 0) {
                    if (injective && used[static_cast<std::size_t>(fy)])
                        return false;
                    slot = fy;
                    used[static_cast<std::size_t>(fy)] = 1;
                    queue.push_back(y);
                } else if (slot != fy) {
                    return false;
                }
            }
        if (i == gens.size())
            return emit(m);
        const int want = g.element_order(gens[i]);
        for (int cand = 0; cand < h.order(); ++cand) {
            const int o = h.element_order(cand);
            if (injective ? o != want : want % o != 0)
                continue;
            images[i] = cand;
            if (rec(i + 1))
                return true;
        }
        return false;
    };
    rec(0);
}

std::vector<int> order_profile(const FiniteGroup& g)
{
    std::vector<int> p;
    for (int a = 0; a < g.order(); ++a)
        p.push_back(g.element_order(a));
    std::sort(p.begin(), p.end());
    return p;
}

} // namespace

std::vector<int> FiniteGroup::generators() const
{
    std::vector<int> by_order(static_cast<std::size_t>(order()));
    std::iota(by_order.begin(), by_order.end(), 0);
    std::stable_sort(by_order.begin(), by_order.end(),
                     [&](int a, int b) { return element_order(a) > element_order(b); });
    std::vector<int> gens;
    std::vector<char> in(static_cast<std::size_t>(order()), 0);
    in[static_cast<std::size_t>(identity_)] = 1;
    for (int a : by_order) {
        if (in[static_cast<std::size_t>(a)])
            continue;
        gens.push_back(a);
        for (int x : closure(*this, gens))
            in[static_cast<std::size_t>(x)] = 1;
    }
    return gens;
}

bool is_homomorphism(const FiniteGroup& g, const FiniteGroup& h, const GroupMap& m)
{
    if (m.size() != static_cast<std::size_t>(g.order()))
        return false;
    for (int x : m)
        if (x < 0 || x >= h.order())
            return false;
    for (int a = 0; a < g.order(); ++a)
        for (int b = 0; b < g.order(); ++b)
            if (m[static_cast<std::size_t>(g.multiply(a, b))] !=
                h.multiply(m[static_cast<std::size_t>(a)], m[static_cast<std::size_t>(b)]))
                return false;
    return true;
}

std::optional<GroupMap> group_isomorphic(const FiniteGroup& g, const FiniteGroup& h)
{
    check_order(g);
    check_order(h);
    if (g.order() != h.order() || g.is_abelian() != h.is_abelian() || order_profile(g) != order_profile(h))
        return std::nullopt;
    std::optional<GroupMap> found;
    search_maps(g, h, true, [&](const GroupMap& m) {
        found = m;
        return true;
    });
    return found;
}

std::vector<GroupMap> all_homomorphisms(const FiniteGroup& g, const FiniteGroup& h)
{
    check_order(g);
    check_order(h);
    std::vector<GroupMap> out;
    search_maps(g, h, false, [&](const GroupMap& m) {
        out.push_back(m);
        return false;
    });
    return out;
}

bool is_admissible_factor(const FiniteGroup& g) { return g.order() >= 2; }

// ---------------------------------------------------------------------------
// Sequences

std::string to_string(const Multiplicity& m) { return m ? std::to_string(*m) : "inf"; }

namespace {

bool greater(const Multiplicity& m, std::uint64_t r) { return !m || *m > r; }

Multiplicity add(const Multiplicity& a, const Multiplicity& b)
{
    if (!a || !b)
        return std::nullopt;
    return *a + *b;
}

} // namespace

FactorSequence::FactorSequence(std::vector<FiniteGroup> alphabet, std::map<std::string, Multiplicity> multiplicity)
    : alphabet_(std::move(alphabet))
{
    std::set<std::string> labels;
    for (const auto& g : alphabet_)
        if (!labels.insert(g.label()).second)
            throw MalformedSequence("label '" + g.label() + "' appears twice in the alphabet");
    for (const auto& [label, _] : multiplicity)
        if (!labels.contains(label))
            throw MalformedSequence("multiplicity given for unknown label '" + label + "'");
    bool positive = false;
    for (const auto& g : alphabet_) {
        auto it = multiplicity.find(g.label());
        mult_.push_back(it == multiplicity.end() ? Multiplicity{0} : it->second);
        positive = positive || greater(mult_.back(), 0);
    }
    if (!positive)
        throw MalformedSequence("every multiplicity is zero");
}

Multiplicity FactorSequence::multiplicity(const std::string& label) const
{
    for (std::size_t i = 0; i < alphabet_.size(); ++i)
        if (alphabet_[i].label() == label)
            return mult_[i];
    throw MalformedSequence("unknown label '" + label + "'");
}

const FiniteGroup& FactorSequence::group(const std::string& label) const
{
    for (const auto& g : alphabet_)
        if (g.label() == label)
            return g;
    throw MalformedSequence("unknown label '" + label + "'");
}

std::optional<std::size_t> FactorSequence::length() const
{
    std::size_t total = 0;
    for (const auto& m : mult_) {
        if (!m)
            return std::nullopt;
        total += static_cast<std::size_t>(*m);
    }
    return total;
}

std::vector<std::size_t> FactorSequence::prefix(std::size_t j) const
{
    std::vector<std::size_t> out;
    for (std::uint64_t round = 0; out.size() < j; ++round) {
        bool any = false;
        for (std::size_t a = 0; a < alphabet_.size() && out.size() < j; ++a)
            if (greater(mult_[a], round)) {
                out.push_back(a);
                any = true;
            }
        if (!any)
            break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Free products

FreeProduct FreeProduct::truncation(const FactorSequence& s, std::size_t j)
{
    std::vector<FiniteGroup> f;
    for (std::size_t a : s.prefix(j))
        f.push_back(s.alphabet()[a]);
    return FreeProduct(std::move(f));
}

void FreeProduct::check(const FreeProductWord& w) const
{
    for (const auto& s : w) {
        if (s.factor >= factors_.size())
            throw InvalidSyllable("factor " + std::to_string(s.factor) + " of " + std::to_string(factors_.size()));
        if (s.element < 0 || s.element >= factors_[s.factor].order())
            throw InvalidSyllable("element " + std::to_string(s.element) + " of factor " + std::to_string(s.factor));
    }
}

FreeProductWord FreeProduct::normal_form(const FreeProductWord& w) const
{
    check(w);
    FreeProductWord out;
    for (const auto& s : w) {
        const auto& g = factors_[s.factor];
        if (s.element == g.identity())
            continue;
        if (!out.empty() && out.back().factor == s.factor) {
            out.back().element = g.multiply(out.back().element, s.element);
            if (out.back().element == g.identity())
                out.pop_back();
        } else {
            out.push_back(s);
        }
    }
    return out;
}

bool FreeProduct::is_normal(const FreeProductWord& w, const FreeProduct& p)
{
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i].element == p.factor(w[i].factor).identity())
            return false;
        if (i > 0 && w[i - 1].factor == w[i].factor)
            return false;
    }
    return true;
}

FreeProductWord FreeProduct::multiply(const FreeProductWord& a, const FreeProductWord& b) const
{
    FreeProductWord w = a;
    w.insert(w.end(), b.begin(), b.end());
    return normal_form(w);
}

FreeProductWord FreeProduct::inverse(const FreeProductWord& w) const
{
    check(w);
    FreeProductWord out;
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        out.push_back({it->factor, factors_[it->factor].inverse(it->element)});
    return out;
}

FreeProductWord FreeProduct::project(const FreeProductWord& w, std::size_t keep) const
{
    check(w);
    FreeProductWord kept;
    for (const auto& s : w)
        if (s.factor < keep)
            kept.push_back(s);
    return normal_form(kept);
}

std::optional<FactorConjugate> conjugate_into_factor(const FreeProduct& p, const FreeProductWord& word)
{
    const FreeProductWord w = p.normal_form(word);
    if (w.empty())
        return FactorConjugate{0, p.size() > 0 ? p.factor(0).identity() : 0, {}};
    std::size_t l = 0;
    std::size_t r = w.size() - 1;
    // w = s_l m s_r with s_l, s_r in one factor is conjugate to m (s_r s_l).
    while (r > l && w[l].factor == w[r].factor) {
        const auto& g = p.factor(w[l].factor);
        if (g.multiply(w[r].element, w[l].element) != g.identity())
            return std::nullopt;  // the merged core has at least two syllables
        ++l;
        --r;
    }
    if (r > l)
        return std::nullopt;
    return FactorConjugate{w[l].factor, w[l].element, FreeProductWord(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(l))};
}

// ---------------------------------------------------------------------------
// Pro-isomorphism

namespace {

struct IsoClass {
    const FiniteGroup* rep = nullptr;
    std::vector<std::string> labels_a, labels_b;
    Multiplicity in_a = 0, in_b = 0;
};

void require_admissible(const FactorSequence& s)
{
    for (const auto& g : s.alphabet())
        if (!is_admissible_factor(g))
            throw InadmissibleFactor("'" + g.label() + "' is the trivial group");
}

std::vector<IsoClass> iso_classes(const FactorSequence& sa, const FactorSequence& sb)
{
    std::vector<IsoClass> classes;
    auto place = [&](const FiniteGroup& g) -> IsoClass& {
        for (auto& c : classes)
            if (group_isomorphic(*c.rep, g))
                return c;
        classes.push_back({&g, {}, {}, 0, 0});
        return classes.back();
    };
    for (const auto& g : sa.alphabet()) {
        auto& c = place(g);
        c.labels_a.push_back(g.label());
        c.in_a = add(c.in_a, sa.multiplicity(g.label()));
    }
    for (const auto& g : sb.alphabet()) {
        auto& c = place(g);
        c.labels_b.push_back(g.label());
        c.in_b = add(c.in_b, sb.multiplicity(g.label()));
    }
    return classes;
}

/// Alphabet index of each position, grown on demand.
class Positions {
public:
    explicit Positions(const FactorSequence& s) : s_(s) {}

    std::optional<std::size_t> at(std::size_t pos)
    {
        grow(pos + 1);
        if (pos < cache_.size())
            return cache_[pos];
        return std::nullopt;
    }
    /// Position of the n-th (0-based) factor whose label is in `labels`.
    std::optional<std::size_t> nth(const std::set<std::size_t>& labels, std::size_t n)
    {
        for (std::size_t want = std::max<std::size_t>(16, cache_.size());; want *= 2) {
            grow(want);
            std::size_t seen = 0;
            for (std::size_t i = 0; i < cache_.size(); ++i)
                if (labels.contains(cache_[i]) && seen++ == n)
                    return i;
            if (cache_.size() < want)
                return std::nullopt;  // the sequence ended
        }
    }
    /// Copy index of position pos among factors with labels in `labels`.
    std::size_t rank(const std::set<std::size_t>& labels, std::size_t pos)
    {
        grow(pos + 1);
        std::size_t n = 0;
        for (std::size_t i = 0; i < pos; ++i)
            if (labels.contains(cache_[i]))
                ++n;
        return n;
    }

private:
    void grow(std::size_t n)
    {
        if (n > cache_.size())
            cache_ = s_.prefix(n);
    }
    const FactorSequence& s_;
    std::vector<std::size_t> cache_;
};

std::set<std::size_t> label_indices(const FactorSequence& s, const std::vector<std::string>& labels)
{
    std::set<std::size_t> out;
    for (std::size_t i = 0; i < s.alphabet().size(); ++i)
        if (std::find(labels.begin(), labels.end(), s.alphabet()[i].label()) != labels.end())
            out.insert(i);
    return out;
}

GroupMap invert(const GroupMap& m)
{
    GroupMap out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        out[static_cast<std::size_t>(m[i])] = static_cast<int>(i);
    return out;
}

} // namespace

ProIsoReport pro_isomorphic(const FactorSequence& sa, const FactorSequence& sb)
{
    require_admissible(sa);
    require_admissible(sb);
    ProIsoReport report;
    report.decision = true;
    for (const auto& c : iso_classes(sa, sb)) {
        if (c.in_a != c.in_b) {
            report.decision = false;
            report.distinguishing = Distinguishing{c.rep->label(), c.in_a, c.in_b};
            report.matching.clear();
            return report;
        }
        report.matching.push_back({c.labels_a, c.labels_b, c.in_a});
    }
    return report;
}

void check_factor_map(const FreeProduct& source, const FreeProduct& target, const FactorMap& m)
{
    if (m.images.size() != source.size())
        throw MalformedLadder("map covers " + std::to_string(m.images.size()) + " factors, source has " +
                              std::to_string(source.size()));
    for (std::size_t i = 0; i < m.images.size(); ++i) {
        if (!m.images[i])
            continue;
        const auto& img = *m.images[i];
        if (img.target >= target.size())
            throw MalformedLadder("factor " + std::to_string(i) + " maps to missing factor " +
                                  std::to_string(img.target));
        if (!is_homomorphism(source.factor(i), target.factor(img.target), img.map))
            throw MalformedLadder("factor " + std::to_string(i) + " element map is not a homomorphism");
        try {
            target.check(img.conjugator);
        } catch (const InvalidSyllable& e) {
            throw MalformedLadder("factor " + std::to_string(i) + " conjugator: " + e.what());
        }
    }
}

FreeProductWord apply(const FreeProduct& target, const FactorMap& m, const FreeProductWord& w)
{
    FreeProductWord out;
    for (const auto& s : w) {
        if (s.factor >= m.images.size())
            throw InvalidSyllable("factor " + std::to_string(s.factor) + " outside the map's source");
        const auto& img = m.images[s.factor];
        if (!img)
            continue;
        out.insert(out.end(), img->conjugator.begin(), img->conjugator.end());
        out.push_back({img->target, img->map.at(static_cast<std::size_t>(s.element))});
        const auto inv = target.inverse(img->conjugator);
        out.insert(out.end(), inv.begin(), inv.end());
    }
    return target.normal_form(out);
}

LadderCheck ladder_verify(const FactorSequence& sa, const FactorSequence& sb, const Ladder& ladder,
                          std::size_t depth)
{
    if (ladder.j.size() < depth || ladder.k.size() < depth + 1 || ladder.up.size() < depth ||
        ladder.down.size() < depth)
        throw MalformedLadder("ladder has fewer than " + std::to_string(depth) + " rungs");
    for (std::size_t i = 1; i < depth; ++i)
        if (ladder.j[i] <= ladder.j[i - 1])
            throw MalformedLadder("left indices are not increasing");
    for (std::size_t i = 1; i <= depth; ++i)
        if (ladder.k[i] <= ladder.k[i - 1])
            throw MalformedLadder("right indices are not increasing");

    auto word_text = [](const FreeProductWord& w) {
        std::string s;
        for (const auto& x : w)
            s += "(" + std::to_string(x.factor) + ":" + std::to_string(x.element) + ")";
        return s.empty() ? std::string("1") : s;
    };
    for (std::size_t r = 0; r < depth; ++r) {
        const std::size_t i = r + 1;
        const FreeProduct g = FreeProduct::truncation(sa, ladder.j[r]);
        const FreeProduct h = FreeProduct::truncation(sb, ladder.k[i]);
        const FreeProduct h_prev = FreeProduct::truncation(sb, ladder.k[i - 1]);
        check_factor_map(h, g, ladder.up[r]);
        check_factor_map(g, h_prev, ladder.down[r]);
        // d_i u_i = bonding H_{k_i} -> H_{k_{i-1}}
        for (std::size_t p = 0; p < h.size(); ++p)
            for (int e = 0; e < h.factor(p).order(); ++e) {
                const FreeProductWord x{{p, e}};
                const auto lhs = apply(h_prev, ladder.down[r], apply(g, ladder.up[r], x));
                if (lhs != h.project(x, ladder.k[i - 1]))
                    return {false, "d" + std::to_string(i) + " u" + std::to_string(i) + " differs from the bonding map on " +
                                       word_text(x) + " (got " + word_text(lhs) + ")"};
            }
        if (r == 0)
            continue;
        // u_{i-1} d_i = bonding G_{j_i} -> G_{j_{i-1}}
        const FreeProduct g_prev = FreeProduct::truncation(sa, ladder.j[r - 1]);
        for (std::size_t q = 0; q < g.size(); ++q)
            for (int e = 0; e < g.factor(q).order(); ++e) {
                const FreeProductWord x{{q, e}};
                const auto lhs = apply(g_prev, ladder.up[r - 1], apply(h_prev, ladder.down[r], x));
                if (lhs != g.project(x, ladder.j[r - 1]))
                    return {false, "u" + std::to_string(i - 1) + " d" + std::to_string(i) +
                                       " differs from the bonding map on " + word_text(x) + " (got " + word_text(lhs) +
                                       ")"};
            }
    }
    return {true, {}};
}

Ladder build_ladder_from_matching(const FactorSequence& sa, const FactorSequence& sb, const ProIsoReport& report,
                                  std::size_t depth)
{
    if (!report.decision)
        throw MalformedLadder("no matching: the sequences are not pro-isomorphic");
    struct ClassData {
        std::set<std::size_t> a, b;
    };
    std::vector<ClassData> classes;
    for (const auto& c : report.matching)
        classes.push_back({label_indices(sa, c.labels_a), label_indices(sb, c.labels_b)});
    auto class_of_a = [&](std::size_t label) {
        for (std::size_t c = 0; c < classes.size(); ++c)
            if (classes[c].a.contains(label))
                return c;
        throw MalformedLadder("label missing from the matching");
    };
    auto class_of_b = [&](std::size_t label) {
        for (std::size_t c = 0; c < classes.size(); ++c)
            if (classes[c].b.contains(label))
                return c;
        throw MalformedLadder("label missing from the matching");
    };
    Positions pa(sa);
    Positions pb(sb);
    // sigma: position in sb -> position in sa (k-th copy to k-th copy).
    auto sigma = [&](std::size_t p) -> std::optional<std::size_t> {
        auto label = pb.at(p);
        if (!label)
            return std::nullopt;
        const auto& c = classes[class_of_b(*label)];
        return pa.nth(c.a, pb.rank(c.b, p));
    };
    auto sigma_inv = [&](std::size_t q) -> std::optional<std::size_t> {
        auto label = pa.at(q);
        if (!label)
            return std::nullopt;
        const auto& c = classes[class_of_a(*label)];
        return pb.nth(c.b, pa.rank(c.a, q));
    };
    std::map<std::pair<std::size_t, std::size_t>, GroupMap> iso_ba;  // (label b, label a)
    auto iso = [&](std::size_t lb, std::size_t la) -> const GroupMap& {
        auto [it, fresh] = iso_ba.try_emplace({lb, la});
        if (fresh) {
            auto m = group_isomorphic(sb.alphabet()[lb], sa.alphabet()[la]);
            if (!m)
                throw MalformedLadder("matched factors are not isomorphic");
            it->second = *m;
        }
        return it->second;
    };

    Ladder ladder;
    ladder.k.push_back(0);
    std::size_t j = 1;
    for (std::size_t i = 1; i <= depth; ++i) {
        std::size_t k = ladder.k.back() + 1;
        for (std::size_t q = 0; q < j; ++q)
            if (auto p = sigma_inv(q))
                k = std::max(k, *p + 1);
        ladder.j.push_back(j);
        ladder.k.push_back(k);
        std::size_t next_j = j + 1;
        for (std::size_t p = 0; p < k; ++p)
            if (auto q = sigma(p))
                next_j = std::max(next_j, *q + 1);
        j = next_j;
    }
    for (std::size_t r = 0; r < depth; ++r) {
        const std::size_t ji = ladder.j[r];
        const std::size_t ki = ladder.k[r + 1];
        const std::size_t k_prev = ladder.k[r];
        const FreeProduct h = FreeProduct::truncation(sb, ki);
        const FreeProduct g = FreeProduct::truncation(sa, ji);
        FactorMap up;
        for (std::size_t p = 0; p < h.size(); ++p) {
            auto q = sigma(p);
            if (q && *q < g.size())
                up.images.push_back(FactorImage{*q, iso(*pb.at(p), *pa.at(*q)), {}});
            else
                up.images.emplace_back();
        }
        FactorMap down;
        for (std::size_t q = 0; q < g.size(); ++q) {
            auto p = sigma_inv(q);
            if (p && *p < k_prev && *p < FreeProduct::truncation(sb, k_prev).size())
                down.images.push_back(FactorImage{*p, invert(iso(*pb.at(*p), *pa.at(q))), {}});
            else
                down.images.emplace_back();
        }
        ladder.up.push_back(std::move(up));
        ladder.down.push_back(std::move(down));
    }
    return ladder;
}

// ---------------------------------------------------------------------------
// Bounded refutation

std::string to_string(RefutationResult::Outcome o)
{
    switch (o) {
    case RefutationResult::Outcome::refuted: return "refuted";
    case RefutationResult::Outcome::ladder_found: return "ladder_found";
    case RefutationResult::Outcome::budget_exceeded: return "budget_exceeded";
    }
    return "?";
}

namespace {

/// Constraint search for one choice of truncation indices. Variables are
/// the images of single factors under u_i and d_i; a value is either the
/// trivial map or (target factor, nontrivial homomorphism).
///
/// A factor that some triangle must send back to itself ("kept") can only
/// go to a target through an injective homomorphism with a left inverse,
/// and kept factors of one map need pairwise distinct targets (their common
/// partner variable would otherwise need two values). Both facts prune
/// before search; the matching check is repeated at every node.
class LadderSearch {
public:
    struct Option {
        std::size_t target = 0;
        const GroupMap* map = nullptr;  ///< nullptr = trivial
    };
    using HomProvider = std::function<const std::vector<GroupMap>&(const FiniteGroup*, const FiniteGroup*)>;

    LadderSearch(const std::vector<const FiniteGroup*>& ga_all, const std::vector<const FiniteGroup*>& gb_all,
                 const std::vector<std::size_t>& j, const std::vector<std::size_t>& k, const HomProvider& homs,
                 std::uint64_t& nodes, std::uint64_t budget)
        : ga_(ga_all), gb_(gb_all), j_(j), k_(k), homs_(homs), nodes_(nodes), budget_(budget)
    {
        depth_ = j_.size();
        for (int m = 0; m < 2; ++m) {
            value_[m].resize(depth_);
            options_[m].resize(depth_);
        }
        std::vector<Var> kept;
        std::vector<Var> rest;
        for (std::size_t r = 0; r < depth_; ++r)
            for (bool up : {false, true}) {
                const std::size_t n = up ? size_b(k_[r + 1]) : size_a(j_[r]);
                value_[up][r].assign(n, -1);
                options_[up][r].resize(n);
                for (std::size_t f = 0; f < n; ++f) {
                    const Var v{up, r, f};
                    options_[up][r][f] = domain(v);
                    (is_kept(v) ? kept : rest).push_back(v);
                }
            }
        std::stable_sort(kept.begin(), kept.end(), [&](const Var& a, const Var& b) {
            return opts(a).size() < opts(b).size();
        });
        order_ = std::move(kept);
        order_.insert(order_.end(), rest.begin(), rest.end());
    }

    enum class Result { none, found, budget };

    Result run() { return matchable() ? rec(0) : Result::none; }

    /// Converts the current full assignment into a ladder.
    Ladder ladder() const
    {
        Ladder l;
        l.j = j_;
        l.k = k_;
        for (std::size_t r = 0; r < depth_; ++r) {
            l.up.push_back(to_map(true, r));
            l.down.push_back(to_map(false, r));
        }
        return l;
    }

private:
    struct Var {
        bool up;
        std::size_t rung;
        std::size_t factor;
    };

    std::size_t size_a(std::size_t j) const { return std::min(j, ga_.size()); }
    std::size_t size_b(std::size_t k) const { return std::min(k, gb_.size()); }

    const FiniteGroup* source(bool up, std::size_t f) const { return up ? gb_[f] : ga_[f]; }
    const FiniteGroup* target(bool up, std::size_t t) const { return up ? ga_[t] : gb_[t]; }
    std::size_t target_count(bool up, std::size_t r) const { return up ? size_a(j_[r]) : size_b(k_[r]); }

    /// u_i(p) with p < k_{i-1}, or d_i(q) with i >= 2 and q < j_{i-1}.
    bool is_kept(const Var& v) const
    {
        return v.up ? v.factor < k_[v.rung] : v.rung >= 1 && v.factor < j_[v.rung - 1];
    }

    static bool injective(const GroupMap& m)
    {
        std::set<int> seen(m.begin(), m.end());
        return seen.size() == m.size();
    }

    bool has_left_inverse(const FiniteGroup* src, const FiniteGroup* dst, const GroupMap& m) const
    {
        for (const auto& back : homs_(dst, src)) {
            bool id = true;
            for (int e = 0; e < src->order() && id; ++e)
                id = back[static_cast<std::size_t>(m[static_cast<std::size_t>(e)])] == e;
            if (id)
                return true;
        }
        return false;
    }

    std::vector<Option> domain(const Var& v) const
    {
        const bool kept = is_kept(v);
        std::vector<Option> out;
        if (!kept)
            out.push_back(Option{});
        const FiniteGroup* src = source(v.up, v.factor);
        for (std::size_t t = 0; t < target_count(v.up, v.rung); ++t)
            for (const auto& m : homs_(src, target(v.up, t)))
                if (!kept || (injective(m) && has_left_inverse(src, target(v.up, t), m)))
                    out.push_back({t, &m});
        return out;
    }

    const std::vector<Option>& opts(const Var& v) const { return options_[v.up][v.rung][v.factor]; }

    const Option* value(bool up, std::size_t r, std::size_t f) const
    {
        const int v = value_[up][r][f];
        if (v < 0)
            return nullptr;
        return &options_[up][r][f][static_cast<std::size_t>(v)];
    }

    /// Composite of the first map's value at factor s followed by the second
    /// map, compared with the identity on s (`keep`) or the trivial map.
    /// nullopt while undetermined.
    std::optional<bool> composite_ok(bool first_up, std::size_t r1, std::size_t s, bool second_up, std::size_t r2,
                                     bool keep) const
    {
        const Option* a = value(first_up, r1, s);
        if (!a)
            return std::nullopt;
        if (!a->map)
            return !keep;
        const Option* b = value(second_up, r2, a->target);
        if (!b)
            return std::nullopt;
        if (!b->map)
            return !keep;
        const FiniteGroup* src = source(first_up, s);
        if (keep) {
            if (b->target != s)
                return false;
            for (int e = 0; e < src->order(); ++e)
                if ((*b->map)[static_cast<std::size_t>((*a->map)[static_cast<std::size_t>(e)])] != e)
                    return false;
            return true;
        }
        const int id = target(second_up, b->target)->identity();
        for (int e = 0; e < src->order(); ++e)
            if ((*b->map)[static_cast<std::size_t>((*a->map)[static_cast<std::size_t>(e)])] != id)
                return false;
        return true;
    }

    /// d_i u_i on H factor p (r = i - 1).
    std::optional<bool> c1(std::size_t r, std::size_t p) const
    {
        return composite_ok(true, r, p, false, r, p < k_[r]);
    }
    /// u_{i-1} d_i on G factor q (r = i - 1 >= 1).
    std::optional<bool> c2(std::size_t r, std::size_t q) const
    {
        return composite_ok(false, r, q, true, r - 1, q < j_[r - 1]);
    }

    bool consistent(const Var& v) const
    {
        auto bad = [](std::optional<bool> x) { return x && !*x; };
        if (v.up) {
            if (bad(c1(v.rung, v.factor)))
                return false;
            if (v.rung + 1 < depth_)
                for (std::size_t q = 0; q < value_[0][v.rung + 1].size(); ++q) {
                    const Option* d = value(false, v.rung + 1, q);
                    if (d && d->map && d->target == v.factor && bad(c2(v.rung + 1, q)))
                        return false;
                }
        } else {
            if (v.rung >= 1 && bad(c2(v.rung, v.factor)))
                return false;
            for (std::size_t p = 0; p < value_[1][v.rung].size(); ++p) {
                const Option* u = value(true, v.rung, p);
                if (u && u->map && u->target == v.factor && bad(c1(v.rung, p)))
                    return false;
            }
        }
        return true;
    }

    /// Kept factors of each map need distinct targets: bipartite matching
    /// of the still-open kept factors into the unused targets.
    bool matchable() const
    {
        for (int up = 0; up < 2; ++up)
            for (std::size_t r = 0; r < depth_; ++r) {
                const std::size_t nt = target_count(up, r);
                std::vector<char> used(nt, 0);
                std::vector<std::vector<std::size_t>> open;
                for (std::size_t f = 0; f < value_[up][r].size(); ++f) {
                    const Var v{static_cast<bool>(up), r, f};
                    if (!is_kept(v))
                        continue;
                    if (const Option* o = value(up, r, f)) {
                        if (used[o->target])
                            return false;
                        used[o->target] = 1;
                        continue;
                    }
                    std::vector<std::size_t> targets;
                    for (const auto& o : opts(v))
                        if (targets.empty() || targets.back() != o.target)
                            targets.push_back(o.target);
                    open.push_back(std::move(targets));
                }
                std::vector<int> match(nt, -1);
                for (std::size_t x = 0; x < open.size(); ++x) {
                    std::vector<char> seen(nt, 0);
                    std::function<bool(std::size_t)> augment = [&](std::size_t y) -> bool {
                        for (std::size_t t : open[y]) {
                            if (used[t] || seen[t])
                                continue;
                            seen[t] = 1;
                            if (match[t] < 0 || augment(static_cast<std::size_t>(match[t]))) {
                                match[t] = static_cast<int>(y);
                                return true;
                            }
                        }
                        return false;
                    };
                    if (!augment(x))
                        return false;
                }
            }
        return true;
    }

    Result rec(std::size_t i)
    {
        if (i == order_.size())
            return Result::found;
        const Var& v = order_[i];
        auto& slot = value_[v.up][v.rung][v.factor];
        for (std::size_t o = 0; o < opts(v).size(); ++o) {
            if (++nodes_ > budget_)
                return Result::budget;
            slot = static_cast<int>(o);
            if (consistent(v) && (!is_kept(v) || matchable())) {
                const Result r = rec(i + 1);
                if (r != Result::none)
                    return r;
            }
        }
        slot = -1;
        return Result::none;
    }

    FactorMap to_map(bool up, std::size_t r) const
    {
        FactorMap m;
        for (std::size_t f = 0; f < value_[up][r].size(); ++f) {
            const Option* o = value(up, r, f);
            if (o && o->map)
                m.images.push_back(FactorImage{o->target, *o->map, {}});
            else
                m.images.emplace_back();
        }
        return m;
    }

    std::vector<const FiniteGroup*> ga_, gb_;
    std::vector<std::size_t> j_, k_;
    const HomProvider& homs_;
    std::uint64_t& nodes_;
    std::uint64_t budget_;
    std::size_t depth_ = 0;
    /// Indexed by [up][rung][factor]; value is an index into the options.
    std::array<std::vector<std::vector<int>>, 2> value_;
    std::array<std::vector<std::vector<std::vector<Option>>>, 2> options_;
    std::vector<Var> order_;
};

void increasing_tuples(std::size_t count, std::size_t lo, std::size_t hi, std::vector<std::size_t>& cur,
                       const std::function<void(const std::vector<std::size_t>&)>& f)
{
    if (cur.size() == count) {
        f(cur);
        return;
    }
    const std::size_t start = cur.empty() ? lo : cur.back() + 1;
    for (std::size_t x = start; x <= hi; ++x) {
        cur.push_back(x);
        increasing_tuples(count, lo, hi, cur, f);
        cur.pop_back();
    }
}

} // namespace

namespace {

struct HomCache {
    std::map<std::pair<const FiniteGroup*, const FiniteGroup*>, std::vector<GroupMap>> cache;

    /// Nontrivial homomorphisms s -> t.
    const std::vector<GroupMap>& operator()(const FiniteGroup* s, const FiniteGroup* t)
    {
        auto [it, fresh] = cache.try_emplace({s, t});
        if (fresh)
            for (auto& m : all_homomorphisms(*s, *t))
                if (std::any_of(m.begin(), m.end(), [&](int x) { return x != t->identity(); }))
                    it->second.push_back(std::move(m));
        return it->second;
    }
};

} // namespace

LadderSearchResult find_ladder(const FactorSequence& sa, const FactorSequence& sb, const std::vector<std::size_t>& j,
                               const std::vector<std::size_t>& k, std::uint64_t budget)
{
    if (j.empty() || k.size() != j.size() + 1)
        throw MalformedLadder("need n left indices and n + 1 right indices");
    for (std::size_t i = 1; i < j.size(); ++i)
        if (j[i] <= j[i - 1])
            throw MalformedLadder("left indices are not increasing");
    for (std::size_t i = 1; i < k.size(); ++i)
        if (k[i] <= k[i - 1])
            throw MalformedLadder("right indices are not increasing");
    if (j.front() == 0)
        throw MalformedLadder("left indices start at 1");
    std::vector<const FiniteGroup*> ga;
    std::vector<const FiniteGroup*> gb;
    for (std::size_t a : sa.prefix(j.back()))
        ga.push_back(&sa.alphabet()[a]);
    for (std::size_t b : sb.prefix(k.back()))
        gb.push_back(&sb.alphabet()[b]);
    HomCache cache;
    const LadderSearch::HomProvider homs = std::ref(cache);
    LadderSearchResult out;
    LadderSearch search(ga, gb, j, k, homs, out.nodes, budget);
    switch (search.run()) {
    case LadderSearch::Result::found: out.ladder = search.ladder(); out.exhausted = true; break;
    case LadderSearch::Result::none: out.exhausted = true; break;
    case LadderSearch::Result::budget: break;
    }
    return out;
}

RefutationResult refute_ladders(const FactorSequence& sa, const FactorSequence& sb, const ProIsoReport& report,
                                const RefutationOptions& options)
{
    if (report.decision || !report.distinguishing)
        throw MalformedLadder("refutation needs a negative report with a distinguishing class");
    if (options.depth < 2 || options.depth > 8)
        throw MalformedLadder("refutation depth must be between 2 and 8");
    const auto& dist = *report.distinguishing;
    const FiniteGroup& rep = [&]() -> const FiniteGroup& {
        for (const auto& g : sa.alphabet())
            if (g.label() == dist.label)
                return g;
        return sb.group(dist.label);
    }();
    std::set<std::size_t> in_a;
    std::set<std::size_t> in_b;
    for (std::size_t i = 0; i < sa.alphabet().size(); ++i)
        if (group_isomorphic(rep, sa.alphabet()[i]))
            in_a.insert(i);
    for (std::size_t i = 0; i < sb.alphabet().size(); ++i)
        if (group_isomorphic(rep, sb.alphabet()[i]))
            in_b.insert(i);

    // The excess copy must lie inside the first truncation the identities
    // constrain: G_{j_1} (checked by u_1 d_2) or H_{k_1} (checked by d_2 u_2).
    const bool excess_in_a = !dist.in_a || (dist.in_b && *dist.in_a > *dist.in_b);
    Positions pa(sa);
    Positions pb(sb);
    const auto excess = excess_in_a ? pa.nth(in_a, static_cast<std::size_t>(*dist.in_b))
                                    : pb.nth(in_b, static_cast<std::size_t>(*dist.in_a));
    if (!excess)
        throw MalformedLadder("distinguishing class has no excess copy");
    const std::size_t need = *excess + 1;
    const std::size_t top = need + options.index_slack;

    std::vector<const FiniteGroup*> ga;
    std::vector<const FiniteGroup*> gb;
    for (std::size_t a : sa.prefix(top))
        ga.push_back(&sa.alphabet()[a]);
    for (std::size_t b : sb.prefix(top))
        gb.push_back(&sb.alphabet()[b]);

    HomCache cache;
    const LadderSearch::HomProvider homs = std::ref(cache);

    RefutationResult result;
    const std::size_t depth = options.depth;
    std::vector<std::size_t> js;
    std::vector<std::size_t> ks;
    bool stop = false;
    increasing_tuples(depth, 1, top, js, [&](const std::vector<std::size_t>& j) {
        if (stop || (excess_in_a && j[0] < need))
            return;
        increasing_tuples(depth + 1, 0, top, ks, [&](const std::vector<std::size_t>& k) {
            if (stop || (!excess_in_a && k[1] < need))
                return;
            ++result.index_tuples;
            LadderSearch search(ga, gb, j, k, homs, result.nodes, options.budget);
            switch (search.run()) {
            case LadderSearch::Result::none: break;
            case LadderSearch::Result::found:
                result.outcome = RefutationResult::Outcome::ladder_found;
                result.ladder = search.ladder();
                stop = true;
                break;
            case LadderSearch::Result::budget:
                result.outcome = RefutationResult::Outcome::budget_exceeded;
                stop = true;
                break;
            }
        });
    });
    if (!stop)
        result.outcome = RefutationResult::Outcome::refuted;
    return result;
}

} // namespace jester::pro
