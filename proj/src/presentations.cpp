#include <jester/presentations.hpp>

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>

namespace jester::group {

Letter inverse(const Letter& l) { return {l.generator, -l.exponent}; }

Word inverse(const Word& w)
{
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        out.push_back(inverse(*it));
    return out;
}

Word concat(const Word& a, const Word& b)
{
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

Word power(const Word& w, int n)
{
    const Word base = n < 0 ? inverse(w) : w;
    Word out;
    for (int i = 0; i < std::abs(n); ++i)
        out.insert(out.end(), base.begin(), base.end());
    return free_reduce(out);
}

static bool cancels(const Letter& a, const Letter& b)
{
    return a.generator == b.generator && a.exponent == -b.exponent;
}

Word free_reduce(const Word& w)
{
    Word out;
    out.reserve(w.size());
    for (const auto& l : w) {
        if (!out.empty() && cancels(out.back(), l))
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

std::map<std::string, int> power_relator_orders(const Presentation& p)
{
    std::map<std::string, int> orders;
    for (const auto& r : p.relators()) {
        if (r.empty())
            continue;
        bool uniform = true;
        for (const auto& l : r)
            uniform = uniform && l == r.front();
        if (!uniform)
            continue;
        const int n = static_cast<int>(r.size());
        auto [it, inserted] = orders.emplace(r.front().generator, n);
        if (!inserted)
            it->second = std::gcd(it->second, n);
    }
    return orders;
}

Word reduce_powers(const Word& w, const std::map<std::string, int>& orders)
{
    std::vector<std::pair<std::string, long long>> runs;
    auto normalize = [&](const std::string& g, long long e) {
        auto it = orders.find(g);
        if (it == orders.end())
            return e;
        const long long n = it->second;
        e = ((e % n) + n) % n;
        return 2 * e > n ? e - n : e;
    };
    for (const auto& l : w) {
        if (!runs.empty() && runs.back().first == l.generator) {
            runs.back().second = normalize(l.generator, runs.back().second + l.exponent);
            if (runs.back().second == 0)
                runs.pop_back();
        } else {
            const long long e = normalize(l.generator, l.exponent);
            if (e != 0)
                runs.emplace_back(l.generator, e);
        }
    }
    Word out;
    for (const auto& [g, e] : runs)
        for (long long i = 0; i < (e > 0 ? e : -e); ++i)
            out.push_back({g, e > 0 ? 1 : -1});
    return out;
}

bool is_freely_reduced(const Word& w)
{
    for (std::size_t i = 1; i < w.size(); ++i)
        if (cancels(w[i - 1], w[i]))
            return false;
    return true;
}

bool is_cyclically_reduced(const Word& w)
{
    return is_freely_reduced(w) && (w.size() < 2 || !cancels(w.front(), w.back()));
}

CyclicReduction cyclic_reduce(const Word& w)
{
    const Word r = free_reduce(w);
    std::size_t lo = 0;
    std::size_t hi = r.size();
    while (hi - lo >= 2 && cancels(r[lo], r[hi - 1])) {
        ++lo;
        --hi;
    }
    return {Word(r.begin() + lo, r.begin() + hi), Word(r.begin(), r.begin() + lo)};
}

int exponent_sum(const Word& w, std::string_view generator)
{
    int s = 0;
    for (const auto& l : w)
        if (l.generator == generator)
            s += l.exponent;
    return s;
}

std::string to_string(const Word& w)
{
    if (w.empty())
        return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i)
            os << ' ';
        os << w[i].generator;
        if (w[i].exponent != 1)
            os << '^' << w[i].exponent;
    }
    return os.str();
}

Word parse_word(std::string_view text)
{
    std::istringstream is{std::string(text)};
    std::string token;
    Word out;
    while (is >> token) {
        if (token == "1")
            continue;
        const auto caret = token.find('^');
        std::string g = token.substr(0, caret);
        int n = 1;
        if (caret != std::string::npos) {
            const std::string e = token.substr(caret + 1);
            auto [p, ec] = std::from_chars(e.data(), e.data() + e.size(), n);
            if (ec != std::errc{} || p != e.data() + e.size())
                throw WordSyntax("bad exponent in '" + token + "'");
        }
        if (g.empty())
            throw WordSyntax("empty generator in '" + token + "'");
        for (int i = 0; i < std::abs(n); ++i)
            out.push_back({g, n < 0 ? -1 : 1});
    }
    return out;
}

// ---------------------------------------------------------------------------

void check_word_alphabet(const Word& w, const std::vector<std::string>& generators)
{
    for (const auto& l : w) {
        if (l.exponent != 1 && l.exponent != -1)
            throw WordSyntax("exponent of '" + l.generator + "' must be +1 or -1");
        if (std::find(generators.begin(), generators.end(), l.generator) == generators.end())
            throw UnknownGenerator("'" + l.generator + "' is not a declared generator");
    }
}

Presentation::Presentation(std::vector<std::string> generators, std::vector<Word> relators)
    : generators_(std::move(generators))
{
    std::set<std::string> seen;
    for (const auto& g : generators_)
        if (!seen.insert(g).second)
            throw UnknownGenerator("generator '" + g + "' declared twice");
    relators_.reserve(relators.size());
    for (auto& r : relators) {
        check_word_alphabet(r, generators_);
        relators_.push_back(free_reduce(r));
    }
}

bool Presentation::has_generator(std::string_view g) const
{
    return std::find(generators_.begin(), generators_.end(), g) != generators_.end();
}

std::size_t Presentation::generator_index(std::string_view g) const
{
    auto it = std::find(generators_.begin(), generators_.end(), g);
    if (it == generators_.end())
        throw UnknownGenerator("'" + std::string(g) + "' is not a declared generator");
    return static_cast<std::size_t>(it - generators_.begin());
}

// ---------------------------------------------------------------------------

Word expand_expression(const Presentation& p, std::span<const RelatorTerm> expression)
{
    Word out;
    for (const auto& t : expression) {
        if (t.relator >= p.relators().size())
            throw InvalidCertificate("relator index " + std::to_string(t.relator) + " out of range");
        if (t.exponent != 1 && t.exponent != -1)
            throw InvalidCertificate("term exponent must be +1 or -1");
        check_word_alphabet(t.conjugator, p.generators());
        const Word& r = p.relators()[t.relator];
        out = concat(out, t.conjugator);
        out = concat(out, t.exponent > 0 ? r : inverse(r));
        out = concat(out, inverse(t.conjugator));
        out = free_reduce(out);
    }
    return out;
}

namespace {

Presentation apply(const Presentation& p, const AddGenerator& m)
{
    if (p.has_generator(m.generator))
        throw InvalidCertificate("generator '" + m.generator + "' already present");
    check_word_alphabet(m.definition, p.generators());
    auto gens = p.generators();
    gens.push_back(m.generator);
    auto rels = p.relators();
    rels.push_back(free_reduce(concat(Word{{m.generator, 1}}, inverse(m.definition))));
    return {std::move(gens), std::move(rels)};
}

Presentation apply(const Presentation& p, const RemoveGenerator& m)
{
    if (!p.has_generator(m.generator))
        throw UnknownGenerator("'" + m.generator + "' is not a declared generator");
    auto occurrences = [&](const Word& r) {
        return std::count_if(r.begin(), r.end(), [&](const Letter& l) { return l.generator == m.generator; });
    };
    std::optional<std::size_t> chosen;
    if (m.relator) {
        if (*m.relator >= p.relators().size() || occurrences(p.relators()[*m.relator]) != 1)
            throw NoEliminatingRelator("relator " + std::to_string(*m.relator) + " does not define '" +
                                       m.generator + "'");
        chosen = m.relator;
    } else {
        for (std::size_t i = 0; i < p.relators().size() && !chosen; ++i)
            if (occurrences(p.relators()[i]) == 1)
                chosen = i;
        if (!chosen)
            throw NoEliminatingRelator("no relator contains '" + m.generator + "' exactly once");
    }
    // Rotate so the generator leads: g^e * u = 1.
    const Word& r = p.relators()[*chosen];
    const auto pos = static_cast<std::size_t>(
        std::find_if(r.begin(), r.end(), [&](const Letter& l) { return l.generator == m.generator; }) - r.begin());
    Word u(r.begin() + pos + 1, r.end());
    u.insert(u.end(), r.begin(), r.begin() + pos);
    const Word value = r[pos].exponent > 0 ? inverse(u) : u;

    WordAssignment a;
    std::vector<std::string> gens;
    for (const auto& g : p.generators()) {
        if (g == m.generator) {
            a[g] = value;
        } else {
            a[g] = Word{{g, 1}};
            gens.push_back(g);
        }
    }
    std::vector<Word> rels;
    for (std::size_t i = 0; i < p.relators().size(); ++i)
        if (i != *chosen)
            rels.push_back(substitute(p.relators()[i], a));
    return {std::move(gens), std::move(rels)};
}

Presentation apply(const Presentation& p, const AddRelator& m)
{
    check_word_alphabet(m.relator, p.generators());
    if (expand_expression(p, m.expression) != free_reduce(m.relator))
        throw InvalidCertificate("expression does not reduce to " + to_string(m.relator));
    auto rels = p.relators();
    rels.push_back(m.relator);
    return {p.generators(), std::move(rels)};
}

Presentation apply(const Presentation& p, const RemoveRelator& m)
{
    if (m.relator >= p.relators().size())
        throw InvalidCertificate("relator index " + std::to_string(m.relator) + " out of range");
    for (const auto& t : m.expression)
        if (t.relator == m.relator)
            throw InvalidCertificate("expression uses the relator being removed");
    if (expand_expression(p, m.expression) != p.relators()[m.relator])
        throw InvalidCertificate("expression does not reduce to relator " + std::to_string(m.relator));
    auto rels = p.relators();
    rels.erase(rels.begin() + static_cast<std::ptrdiff_t>(m.relator));
    return {p.generators(), std::move(rels)};
}

} // namespace

Presentation tietze_apply(const Presentation& p, const TietzeCertificate& c)
{
    return std::visit([&](const auto& move) { return apply(p, move); }, c);
}

// ---------------------------------------------------------------------------

IntMatrix exponent_matrix(const Presentation& p)
{
    IntMatrix m(p.relators().size(), std::vector<BigInt>(p.generators().size(), 0));
    for (std::size_t i = 0; i < p.relators().size(); ++i)
        for (const auto& l : p.relators()[i])
            m[i][p.generator_index(l.generator)] += l.exponent;
    return m;
}

std::vector<BigInt> smith_diagonal(IntMatrix m, std::size_t columns)
{
    const std::size_t rows = m.size();
    std::vector<BigInt> diag;
    std::size_t t = 0;
    while (t < rows && t < columns) {
        // Pivot: smallest nonzero absolute value in the trailing block.
        std::optional<std::pair<std::size_t, std::size_t>> piv;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < columns; ++j)
                if (m[i][j] != 0 && (!piv || abs(m[i][j]) < abs(m[piv->first][piv->second])))
                    piv = {i, j};
        if (!piv)
            break;
        std::swap(m[t], m[piv->first]);
        for (auto& row : m)
            std::swap(row[t], row[piv->second]);

        bool clean = true;
        for (std::size_t i = t + 1; i < rows; ++i) {
            if (m[i][t] == 0)
                continue;
            const BigInt q = m[i][t] / m[t][t];
            for (std::size_t j = t; j < columns; ++j)
                m[i][j] -= q * m[t][j];
            if (m[i][t] != 0)
                clean = false;
        }
        for (std::size_t j = t + 1; j < columns; ++j) {
            if (m[t][j] == 0)
                continue;
            const BigInt q = m[t][j] / m[t][t];
            for (std::size_t i = t; i < rows; ++i)
                m[i][j] -= q * m[i][t];
            if (m[t][j] != 0)
                clean = false;
        }
        if (!clean)
            continue;  // a smaller remainder appeared; pick a new pivot
        // Divisibility: fold any offending row into row t and retry.
        bool divides = true;
        for (std::size_t i = t + 1; i < rows && divides; ++i)
            for (std::size_t j = t + 1; j < columns; ++j)
                if (m[i][j] % m[t][t] != 0) {
                    for (std::size_t k = t; k < columns; ++k)
                        m[t][k] += m[i][k];
                    divides = false;
                    break;
                }
        if (!divides)
            continue;
        diag.push_back(abs(m[t][t]));
        ++t;
    }
    while (diag.size() < columns)
        diag.push_back(0);
    return diag;
}

std::vector<BigInt> abelianization(const Presentation& p)
{
    std::vector<BigInt> out;
    for (auto& d : smith_diagonal(exponent_matrix(p), p.generators().size()))
        if (d != 1)
            out.push_back(d);
    return out;
}

// ---------------------------------------------------------------------------

Word substitute(const Word& w, const WordAssignment& a)
{
    Word out;
    for (const auto& l : w) {
        auto it = a.find(l.generator);
        if (it == a.end())
            throw UnmappedGenerator("generator '" + l.generator + "' has no image");
        out = concat(out, l.exponent > 0 ? it->second : inverse(it->second));
    }
    return free_reduce(out);
}

WordAssignment compose(const WordAssignment& first, const WordAssignment& second)
{
    WordAssignment out;
    for (const auto& [g, w] : first)
        out[g] = substitute(w, second);
    return out;
}

} // namespace jester::group
