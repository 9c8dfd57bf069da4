#pragma once

#include <jester/error.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace jester::pro {

JESTER_DEFINE_ERROR(MalformedGroup);
JESTER_DEFINE_ERROR(MalformedSequence);
JESTER_DEFINE_ERROR(InvalidSyllable);
JESTER_DEFINE_ERROR(OrderTooLarge);
JESTER_DEFINE_ERROR(InadmissibleFactor);
JESTER_DEFINE_ERROR(MalformedLadder);

/// Finite group given by its multiplication table over elements 0..n-1.
class FiniteGroup {
public:
    using Table = std::vector<std::vector<int>>;

    FiniteGroup() = default;
    /// Validates closure, associativity, identity and inverses; throws
    /// MalformedGroup otherwise.
    FiniteGroup(std::string label, Table table);

    static FiniteGroup cyclic(int n, std::string label = "");
    /// Direct product with pairs (a, b) numbered a * |h| + b.
    static FiniteGroup product(const FiniteGroup& g, const FiniteGroup& h, std::string label = "");
    /// Symmetric group on 3 letters.
    static FiniteGroup symmetric3(std::string label = "S3");

    const std::string& label() const { return label_; }
    int order() const { return static_cast<int>(table_.size()); }
    int identity() const { return identity_; }
    int multiply(int a, int b) const { return table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
    int inverse(int a) const { return inverse_[static_cast<std::size_t>(a)]; }
    int element_order(int a) const { return element_order_[static_cast<std::size_t>(a)]; }
    bool is_abelian() const;
    const Table& table() const { return table_; }

    /// Small generating set, chosen greedily by decreasing element order.
    std::vector<int> generators() const;

private:
    std::string label_;
    Table table_;
    int identity_ = 0;
    std::vector<int> inverse_;
    std::vector<int> element_order_;
};

/// Element map g -> h as an index vector.
using GroupMap = std::vector<int>;

inline constexpr int max_isomorphism_order = 128;

/// An isomorphism g -> h, or none. Throws OrderTooLarge above 128 elements.
std::optional<GroupMap> group_isomorphic(const FiniteGroup& g, const FiniteGroup& h);

/// Every homomorphism g -> h (including the trivial one).
std::vector<GroupMap> all_homomorphisms(const FiniteGroup& g, const FiniteGroup& h);

bool is_homomorphism(const FiniteGroup& g, const FiniteGroup& h, const GroupMap& m);

/// Nontrivial finite groups are indecomposable and not infinite cyclic.
bool is_admissible_factor(const FiniteGroup& g);

// ---------------------------------------------------------------------------
// Sequences of factors

/// Non-negative count, or nullopt for infinitely many copies.
using Multiplicity = std::optional<std::uint64_t>;

std::string to_string(const Multiplicity& m);

/// The infinite (or finite) factor list A_1, A_2, ... described by an
/// alphabet and multiplicities. Factors are laid out round-robin: pass r
/// walks the alphabet in order and emits each label whose multiplicity
/// exceeds r.
class FactorSequence {
public:
    FactorSequence() = default;
    /// Labels absent from `multiplicity` have multiplicity 0. Throws
    /// MalformedSequence for duplicate or unknown labels or when every
    /// multiplicity is 0.
    FactorSequence(std::vector<FiniteGroup> alphabet, std::map<std::string, Multiplicity> multiplicity);

    const std::vector<FiniteGroup>& alphabet() const { return alphabet_; }
    Multiplicity multiplicity(const std::string& label) const;
    const FiniteGroup& group(const std::string& label) const;

    /// Total number of factors, nullopt when infinite.
    std::optional<std::size_t> length() const;
    /// Alphabet indices of the first min(j, length) factors.
    std::vector<std::size_t> prefix(std::size_t j) const;

private:
    std::vector<FiniteGroup> alphabet_;
    std::vector<Multiplicity> mult_;
};

// ---------------------------------------------------------------------------
// Free products

struct Syllable {
    std::size_t factor = 0;  ///< position in the free product
    int element = 0;

    auto operator<=>(const Syllable&) const = default;
};

using FreeProductWord = std::vector<Syllable>;

/// Free product of finitely many finite groups (a truncation G_j).
class FreeProduct {
public:
    FreeProduct() = default;
    explicit FreeProduct(std::vector<FiniteGroup> factors) : factors_(std::move(factors)) {}
    /// G_j: the free product of the first j factors of s.
    static FreeProduct truncation(const FactorSequence& s, std::size_t j);

    std::size_t size() const { return factors_.size(); }
    const FiniteGroup& factor(std::size_t i) const { return factors_.at(i); }
    const std::vector<FiniteGroup>& factors() const { return factors_; }

    /// Throws InvalidSyllable for an unknown factor or element.
    void check(const FreeProductWord& w) const;
    /// Merges adjacent syllables of the same factor and drops identities.
    FreeProductWord normal_form(const FreeProductWord& w) const;
    static bool is_normal(const FreeProductWord& w, const FreeProduct& p);
    FreeProductWord multiply(const FreeProductWord& a, const FreeProductWord& b) const;
    FreeProductWord inverse(const FreeProductWord& w) const;

    /// Kills every factor at position >= keep and renormalizes (the bonding
    /// map G_j -> G_keep).
    FreeProductWord project(const FreeProductWord& w, std::size_t keep) const;

private:
    std::vector<FiniteGroup> factors_;
};

struct FactorConjugate {
    std::size_t factor = 0;
    int element = 0;
    FreeProductWord conjugator;  ///< w = conjugator * (factor, element) * conjugator^-1
};

/// Some (factor, conjugator) iff the cyclic reduction of the normal form w
/// has at most one syllable. The identity lies in factor 0.
std::optional<FactorConjugate> conjugate_into_factor(const FreeProduct& p, const FreeProductWord& w);

// ---------------------------------------------------------------------------
// Pro-isomorphism

/// Alphabet labels of one isomorphism class, from both sequences.
struct ClassMatch {
    std::vector<std::string> labels_a;
    std::vector<std::string> labels_b;
    Multiplicity multiplicity;
};

struct Distinguishing {
    std::string label;  ///< representative of the class (from whichever side has it)
    Multiplicity in_a;
    Multiplicity in_b;
};

struct ProIsoReport {
    bool decision = false;
    std::vector<ClassMatch> matching;          ///< when decision is true
    std::optional<Distinguishing> distinguishing;  ///< when decision is false
};

/// Compares the multiplicity of every isomorphism class of factors. Throws
/// InadmissibleFactor if an alphabet contains the trivial group.
ProIsoReport pro_isomorphic(const FactorSequence& sa, const FactorSequence& sb);

/// Image of one source factor: trivial, or into a conjugate of one target factor.
struct FactorImage {
    std::size_t target = 0;
    GroupMap map;
    FreeProductWord conjugator;
};

/// Homomorphism between free products given factor by factor.
struct FactorMap {
    std::vector<std::optional<FactorImage>> images;  ///< one per source factor
};

/// Checks sizes, target positions and that each element map is a homomorphism.
void check_factor_map(const FreeProduct& source, const FreeProduct& target, const FactorMap& m);

FreeProductWord apply(const FreeProduct& target, const FactorMap& m, const FreeProductWord& w);

/// Commuting ladder between the inverse sequences G_j = A_1 * ... * A_j and
/// H_k = B_1 * ... * B_k with projection bonding maps:
///
///   d_i : G_{j_i} -> H_{k_{i-1}},   u_i : H_{k_i} -> G_{j_i}
///
/// with d_i u_i = (H_{k_i} -> H_{k_{i-1}}) and u_{i-1} d_i = (G_{j_i} -> G_{j_{i-1}}).
/// Rung i (1-based) is stored at index i-1; `k` has one extra leading entry k_0.
struct Ladder {
    std::vector<std::size_t> j;
    std::vector<std::size_t> k;
    std::vector<FactorMap> up;
    std::vector<FactorMap> down;
};

struct LadderCheck {
    bool holds = false;
    std::string failure;  ///< first failing identity, empty when holds
};

/// Checks both triangle families on every element of every factor through
/// `depth` rungs. Throws MalformedLadder for inconsistent shapes or maps.
LadderCheck ladder_verify(const FactorSequence& sa, const FactorSequence& sb, const Ladder& ladder,
                          std::size_t depth);

/// Builds a ladder of the given depth from a positive report: the k-th copy
/// of each class in sb is sent to the k-th copy in sa.
Ladder build_ladder_from_matching(const FactorSequence& sa, const FactorSequence& sb, const ProIsoReport& report,
                                  std::size_t depth);

struct RefutationOptions {
    std::size_t depth = 3;
    /// Truncation indices range up to the first excess copy plus this slack.
    std::size_t index_slack = 3;
    std::uint64_t budget = 5'000'000;  ///< search nodes
};

struct RefutationResult {
    enum class Outcome { refuted, ladder_found, budget_exceeded };
    Outcome outcome = Outcome::budget_exceeded;
    std::optional<Ladder> ladder;   ///< a passing ladder, if one was found
    std::uint64_t index_tuples = 0;
    std::uint64_t nodes = 0;
};

std::string to_string(RefutationResult::Outcome o);

/// Searches factor-wise ladders with empty conjugators for fixed indices
/// (j_1..j_n, k_0..k_n). Returns a ladder passing ladder_verify, or nullopt
/// if none exists; throws OrderTooLarge/MalformedLadder on bad input.
/// `nodes` accumulates the search effort; the search stops at `budget`.
struct LadderSearchResult {
    std::optional<Ladder> ladder;
    bool exhausted = false;  ///< false when the budget ran out
    std::uint64_t nodes = 0;
};
LadderSearchResult find_ladder(const FactorSequence& sa, const FactorSequence& sb, const std::vector<std::size_t>& j,
                               const std::vector<std::size_t>& k, std::uint64_t budget = 5'000'000);

/// Bounded search for a ladder between sa and sb when pro_isomorphic says
/// no: all index tuples whose truncations contain the first excess copy of
/// the distinguishing class, all factor-wise maps with empty conjugators.
/// Evidence, not proof.
RefutationResult refute_ladders(const FactorSequence& sa, const FactorSequence& sb, const ProIsoReport& report,
                                const RefutationOptions& options = {});

} // namespace jester::pro
