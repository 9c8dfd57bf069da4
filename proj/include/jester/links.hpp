#pragma once

#include <jester/presentations.hpp>

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace jester::links {

JESTER_DEFINE_ERROR(MalformedDiagram);
JESTER_DEFINE_ERROR(UnknownArc);
JESTER_DEFINE_ERROR(UnknownComponent);
JESTER_DEFINE_ERROR(UnderdeterminedImages);

using group::Presentation;
using group::Word;

/// Sign convention (see docs/conventions.md): a crossing is +1 when the over
/// strand, rotated counterclockwise by less than pi, points along the under
/// strand. The Wirtinger relation at a crossing of sign e is
///     x_out = x_over^-e * x_in * x_over^e.
struct Crossing {
    std::string over;
    std::string under_in;
    std::string under_out;
    int sign = 1;

    bool operator==(const Crossing&) const = default;
};

/// Oriented link diagram. Each component lists its arcs in traversal order;
/// an arc runs from one undercrossing to the next.
struct LinkDiagram {
    std::vector<std::string> arcs;
    std::vector<std::vector<std::string>> components;
    std::vector<Crossing> crossings;

    bool operator==(const LinkDiagram&) const = default;
};

struct DiagramReport {
    std::size_t components = 0;
    std::size_t crossings = 0;
    std::size_t arcs = 0;
};

/// Throws MalformedDiagram naming the first violated incidence.
DiagramReport validate_diagram(const LinkDiagram& d);

/// One generator per arc (named after the arc), one relator per crossing:
/// x_out * x_over^-e * x_in^-1 * x_over^e.
Presentation wirtinger(const LinkDiagram& d);

Word meridian_word(const LinkDiagram& d, const std::string& arc);

/// Reference framing against which the integer `framing` is counted.
enum class FramingReference {
    blackboard,  ///< parallel push-off in the plane of the diagram (no twists as drawn)
    seifert,     ///< null-homologous longitude in the complement of the component
};

/// Writhe of a component: sum of signs of crossings where it meets itself.
int self_writhe(const LinkDiagram& d, std::size_t component);

/// Index of the component containing `arc`.
std::size_t component_of(const LinkDiagram& d, const std::string& arc);

/// Product, along the component starting at its first listed arc, of
/// x_over^sign at each undercrossing, times meridian^k where
/// k = framing (blackboard) or framing - self_writhe (seifert). The meridian
/// is the generator of the first listed arc, which the word commutes with.
Word longitude_word(const LinkDiagram& d, std::size_t component, int framing,
                    FramingReference reference = FramingReference::blackboard);

struct SurgeryRelator {
    enum class Source { longitude, explicit_word };

    std::string label;
    Word word;
    Source source = Source::explicit_word;
    std::size_t component = 0;  ///< meaningful for Source::longitude
    int framing = 0;
};

/// Relator killing the longitude of `component` at the given framing.
SurgeryRelator longitude_relator(const LinkDiagram& d, std::string label, std::size_t component,
                                 int framing);

/// Appends the relators in order; existing relators are untouched.
Presentation adjoin_relators(const Presentation& p, const std::vector<SurgeryRelator>& rs);

/// Extends images of some arcs to every arc using the crossing relations,
/// solving each crossing for whichever of in/out is missing once the over
/// arc is known. Throws UnderdeterminedImages if propagation stalls.
template <group::Evaluatable T>
std::map<std::string, T> propagate_arc_images(const LinkDiagram& d, std::map<std::string, T> images)
{
    using Tr = group::ElementTraits<T>;
    for (const auto& [arc, _] : images)
        (void)component_of(d, arc);
    bool progress = true;
    while (progress && images.size() < d.arcs.size()) {
        progress = false;
        for (const auto& c : d.crossings) {
            auto over = images.find(c.over);
            if (over == images.end())
                continue;
            const T o = c.sign > 0 ? over->second : Tr::inverse(over->second);
            const bool has_in = images.contains(c.under_in);
            const bool has_out = images.contains(c.under_out);
            if (has_in && !has_out) {
                images.emplace(c.under_out, Tr::multiply(Tr::multiply(Tr::inverse(o), images.at(c.under_in)), o));
                progress = true;
            } else if (has_out && !has_in) {
                images.emplace(c.under_in, Tr::multiply(Tr::multiply(o, images.at(c.under_out)), Tr::inverse(o)));
                progress = true;
            }
        }
    }
    if (images.size() < d.arcs.size())
        throw UnderdeterminedImages(std::to_string(d.arcs.size() - images.size()) +
                                    " arcs cannot be reached from the given images");
    return images;
}

} // namespace jester::links
