#pragma once

#include <jester/error.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <concepts>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace jester::group {

JESTER_DEFINE_ERROR(InvalidCertificate);
JESTER_DEFINE_ERROR(NoEliminatingRelator);
JESTER_DEFINE_ERROR(UnmappedGenerator);
JESTER_DEFINE_ERROR(UnknownGenerator);
JESTER_DEFINE_ERROR(WordSyntax);

using BigInt = boost::multiprecision::cpp_int;

/// One signed generator symbol. Exponents are always +1 or -1; powers are
/// spelled out letter by letter.
struct Letter {
    std::string generator;
    int exponent = 1;

    auto operator<=>(const Letter&) const = default;
};

using Word = std::vector<Letter>;

Letter inverse(const Letter& l);
Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);
Word power(const Word& w, int n);

/// Unique freely reduced form (single left-to-right stack pass).
Word free_reduce(const Word& w);
bool is_freely_reduced(const Word& w);

struct CyclicReduction {
    Word reduced;
    Word conjugator;  ///< w == conjugator * reduced * conjugator^-1 after reduction
};

CyclicReduction cyclic_reduce(const Word& w);
bool is_cyclically_reduced(const Word& w);

int exponent_sum(const Word& w, std::string_view generator);

/// "x5 x2^-1 x1^-1"; the empty word prints as "1".
std::string to_string(const Word& w);

/// Parses whitespace separated tokens of the form `g`, `g^n`, `g^-n`.
/// "1" or an empty string is the empty word.
Word parse_word(std::string_view text);

/// Finitely presented group. Relators are stored freely reduced, in the
/// order given; equality is ordered comparison.
class Presentation {
public:
    Presentation() = default;
    Presentation(std::vector<std::string> generators, std::vector<Word> relators);

    const std::vector<std::string>& generators() const { return generators_; }
    const std::vector<Word>& relators() const { return relators_; }
    bool has_generator(std::string_view g) const;
    std::size_t generator_index(std::string_view g) const;

    bool operator==(const Presentation&) const = default;

private:
    std::vector<std::string> generators_;
    std::vector<Word> relators_;
};

void check_word_alphabet(const Word& w, const std::vector<std::string>& generators);

// ---------------------------------------------------------------------------
// Tietze transformations. Every move carries its own justification; nothing
// here searches for consequences of the relators.

/// conjugator * R[relator]^exponent * conjugator^-1
struct RelatorTerm {
    std::size_t relator = 0;
    Word conjugator;
    int exponent = 1;
};

/// Adds `generator` together with the defining relator generator * definition^-1.
struct AddGenerator {
    std::string generator;
    Word definition;
};

/// Removes `generator` using a relator in which it occurs exactly once. If
/// `relator` is empty the first such relator is used.
struct RemoveGenerator {
    std::string generator;
    std::optional<std::size_t> relator;
};

/// Appends `relator`, which must equal the product of `expression` after
/// free reduction.
struct AddRelator {
    Word relator;
    std::vector<RelatorTerm> expression;
};

/// Drops relator `relator`; `expression` rebuilds it from the others.
struct RemoveRelator {
    std::size_t relator = 0;
    std::vector<RelatorTerm> expression;
};

using TietzeCertificate = std::variant<AddGenerator, RemoveGenerator, AddRelator, RemoveRelator>;

/// Free reduction of the product of conjugates named by `expression`.
Word expand_expression(const Presentation& p, std::span<const RelatorTerm> expression);

Presentation tietze_apply(const Presentation& p, const TietzeCertificate& c);

// ---------------------------------------------------------------------------
// Abelianization

using IntMatrix = std::vector<std::vector<BigInt>>;

/// Rows = relators, columns = generators.
IntMatrix exponent_matrix(const Presentation& p);

/// Diagonal of the Smith normal form (non-negative, each dividing the next),
/// padded with zeros up to the column count.
std::vector<BigInt> smith_diagonal(IntMatrix m, std::size_t columns);

/// Invariant factors of the abelianized group: entries != 1 of the Smith
/// diagonal, with 0 standing for an infinite cyclic factor. Empty means the
/// abelianization is trivial.
std::vector<BigInt> abelianization(const Presentation& p);

// ---------------------------------------------------------------------------
// Homomorphisms

using WordAssignment = std::map<std::string, Word>;

/// Homomorphic image of w, freely reduced.
Word substitute(const Word& w, const WordAssignment& a);

/// x -> substitute(first[x], second): apply `first`, then `second`.
WordAssignment compose(const WordAssignment& first, const WordAssignment& second);

/// Group operations a target type needs for evaluation. Specialize for each
/// evaluatable element type.
template <class T>
struct ElementTraits;

template <class T>
concept Evaluatable = requires(const T& a, const T& b) {
    { ElementTraits<T>::identity() } -> std::convertible_to<T>;
    { ElementTraits<T>::multiply(a, b) } -> std::convertible_to<T>;
    { ElementTraits<T>::inverse(a) } -> std::convertible_to<T>;
    { ElementTraits<T>::distance_from_identity(a) } -> std::convertible_to<double>;
};

/// Left-to-right product of the images of the letters of w.
template <Evaluatable T>
T evaluate(const Word& w, const std::map<std::string, T>& images)
{
    using Tr = ElementTraits<T>;
    T result = Tr::identity();
    for (const auto& l : w) {
        auto it = images.find(l.generator);
        if (it == images.end())
            throw UnmappedGenerator("generator '" + l.generator + "' has no image");
        result = Tr::multiply(result, l.exponent > 0 ? it->second : Tr::inverse(it->second));
    }
    return result;
}

/// Free group elements as freely reduced words; the "distance from the
/// identity" is the reduced length.
template <>
struct ElementTraits<Word> {
    static Word identity() { return {}; }
    static Word multiply(const Word& a, const Word& b) { return free_reduce(concat(a, b)); }
    static Word inverse(const Word& a) { return group::inverse(a); }
    static double distance_from_identity(const Word& a) { return static_cast<double>(a.size()); }
};

/// Orders n of the generators g with a relator g^n (or g^-n) in p.
std::map<std::string, int> power_relator_orders(const Presentation& p);

/// Normal form of w in the free product of the cyclic groups <g | g^n>
/// given by `orders` (generators without an order are infinite cyclic):
/// maximal runs of one generator are merged and their exponent reduced to
/// (-n/2, n/2]. Equal to w in any group where the power relators hold.
Word reduce_powers(const Word& w, const std::map<std::string, int>& orders);

struct HomomorphismReport {
    bool holds = true;
    std::vector<double> residuals;  ///< per relator, distance of its image from identity
};

template <Evaluatable T>
HomomorphismReport verify_homomorphism(const Presentation& p,
                                       const std::map<std::string, T>& images,
                                       double tol)
{
    for (const auto& g : p.generators())
        if (!images.contains(g))
            throw UnmappedGenerator("generator '" + g + "' has no image");
    HomomorphismReport report;
    for (const auto& r : p.relators()) {
        const double d = ElementTraits<T>::distance_from_identity(evaluate(r, images));
        report.residuals.push_back(d);
        if (!(d < tol))
            report.holds = false;
    }
    return report;
}

} // namespace jester::group
