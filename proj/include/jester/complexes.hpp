#pragma once

#include <jester/error.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace jester::complexes {

JESTER_DEFINE_ERROR(MalformedComplex);
JESTER_DEFINE_ERROR(NotFreePair);
JESTER_DEFINE_ERROR(NotSubcomplex);
JESTER_DEFINE_ERROR(DegenerateWord);
JESTER_DEFINE_ERROR(NonSimplicial);
JESTER_DEFINE_ERROR(EmptyComplex);

/// Sorted vertex indices, no repeats, 1 to 4 entries.
using Simplex = std::vector<int>;

inline int dimension(const Simplex& s) { return static_cast<int>(s.size()) - 1; }
bool is_face(const Simplex& face, const Simplex& of);

/// Finite simplicial complex of dimension at most 3, closed under faces.
class SimplicialComplex {
public:
    static constexpr int max_dimension = 3;

    SimplicialComplex() = default;
    /// All simplices must be listed; throws MalformedComplex unless face-closed.
    SimplicialComplex(std::vector<std::string> vertices, std::set<Simplex> simplices);
    /// Closes the given simplices under faces. Vertices listed but used by no
    /// simplex become isolated points.
    static SimplicialComplex from_maximal(std::vector<std::string> vertices, const std::vector<Simplex>& simplices);
    static SimplicialComplex from_named(std::vector<std::string> vertices,
                                        const std::vector<std::vector<std::string>>& simplices);

    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::set<Simplex>& simplices() const { return simplices_; }
    std::size_t size() const { return simplices_.size(); }
    bool empty() const { return simplices_.empty(); }
    bool contains(const Simplex& s) const { return simplices_.contains(s); }
    int dimension() const;
    std::vector<std::size_t> counts_by_dimension() const;
    std::vector<Simplex> maximal_simplices() const;
    int vertex_index(const std::string& name) const;
    std::vector<std::string> names(const Simplex& s) const;
    /// Canonical sorted simplex from vertex names.
    Simplex simplex(const std::vector<std::string>& names) const;

    /// Subcomplex on the same vertex list.
    SimplicialComplex with_simplices(std::set<Simplex> simplices) const;
    bool is_connected() const;

    bool operator==(const SimplicialComplex&) const = default;

private:
    std::vector<std::string> vertices_;
    std::set<Simplex> simplices_;
};

/// Closure of `simplices` under taking faces.
std::set<Simplex> face_closure(const std::vector<Simplex>& simplices);

long euler_characteristic(const SimplicialComplex& k);

struct FreePair {
    Simplex face;
    Simplex coface;

    bool operator==(const FreePair&) const = default;
};

/// Simplices that are proper faces of exactly one simplex, with that simplex.
std::vector<FreePair> free_faces(const SimplicialComplex& k);

SimplicialComplex elementary_collapse(const SimplicialComplex& k, const Simplex& face, const Simplex& coface);

struct CollapseSequence {
    std::vector<FreePair> steps;
};

/// True iff every step is a free pair of the running complex and the end
/// result is a single vertex.
bool verify_collapse_sequence(const SimplicialComplex& k, const CollapseSequence& s);

struct CollapseOptions {
    std::uint64_t budget = 1'000'000;  ///< complex states the search may visit
    std::uint64_t seed = 1;
    unsigned greedy_restarts = 64;
};

struct CollapseResult {
    enum class Verdict { collapsible, not_collapsible, budget_exceeded };
    /// Why a negative verdict is proven.
    enum class Reason { none, no_free_face, euler_characteristic, disconnected, exhausted };

    Verdict verdict = Verdict::budget_exceeded;
    Reason reason = Reason::none;
    std::optional<CollapseSequence> sequence;
    std::uint64_t states = 0;
};

std::string to_string(CollapseResult::Verdict v);
std::string to_string(CollapseResult::Reason r);

/// Seeded greedy restarts, then depth-first search over free pairs in
/// index order with memoized states. A negative verdict is reported as
/// proven only for an empty free-face set, chi != 1, a disconnected complex,
/// or an exhausted search; otherwise the verdict is budget_exceeded.
CollapseResult is_collapsible(const SimplicialComplex& k, const CollapseOptions& options = {});

struct SplitReport {
    bool union_ok = false;
    SimplicialComplex a, b, c;
    CollapseResult a_result, b_result, c_result;

    bool all_collapsible() const;
};

/// A and B are the face closures of the given simplices, each of which must
/// belong to k. C = A intersect B.
SplitReport split_check(const SimplicialComplex& k, const std::vector<Simplex>& a, const std::vector<Simplex>& b,
                        const CollapseOptions& options = {});

// ---------------------------------------------------------------------------
// Polygon identifications

struct PolygonSide {
    std::string label;
    int direction = 1;

    bool operator==(const PolygonSide&) const = default;
};

struct IdentificationPolygon {
    std::vector<PolygonSide> word;  ///< sides in counterclockwise order
};

struct PolygonComplex {
    SimplicialComplex complex;
    std::vector<Simplex> triangles;  ///< in construction order
    /// Index of the half cone-sector containing each triangle; sector j is
    /// the cone over the j-th boundary segment, halves counted
    /// counterclockwise (2j, 2j + 1).
    std::vector<int> half_sector;
    std::size_t half_sector_count = 0;
};

/// Cone triangulation of the polygon, two barycentric subdivisions, then the
/// side identifications. The result is re-checked for degenerate triangles,
/// repeated triangles and multi-edges; any of these throws NonSimplicial.
PolygonComplex polygon_identification_complex(const IdentificationPolygon& p);

/// Triangles whose half-sector lies in the cyclic range [first, first + length).
std::vector<Simplex> sector_range(const PolygonComplex& pc, std::size_t first, std::size_t length);

struct SectorSplit {
    std::size_t first = 0;
    std::size_t length = 0;
    SplitReport report;
};

/// Tries every cut of the polygon through the cone point along half-sector
/// boundaries and returns those for which A, B and A intersect B all collapse.
std::vector<SectorSplit> search_sector_splits(const PolygonComplex& pc, const CollapseOptions& options = {});

} // namespace jester::complexes
