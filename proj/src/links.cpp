#include <jester/links.hpp>

#include <algorithm>
#include <set>

namespace jester::links {

using group::Letter;

namespace {

struct ArcPlace {
    std::size_t component;
    std::size_t position;
};

std::map<std::string, ArcPlace> arc_places(const LinkDiagram& d)
{
    std::map<std::string, ArcPlace> places;
    for (std::size_t c = 0; c < d.components.size(); ++c)
        for (std::size_t i = 0; i < d.components[c].size(); ++i)
            places.emplace(d.components[c][i], ArcPlace{c, i});
    return places;
}

const std::string& next_arc(const LinkDiagram& d, const ArcPlace& p)
{
    const auto& comp = d.components[p.component];
    return comp[(p.position + 1) % comp.size()];
}

} // namespace

DiagramReport validate_diagram(const LinkDiagram& d)
{
    std::set<std::string> declared;
    for (const auto& a : d.arcs) {
        if (a.empty())
            throw MalformedDiagram("empty arc name");
        if (!declared.insert(a).second)
            throw MalformedDiagram("arc '" + a + "' declared twice");
    }
    std::set<std::string> placed;
    for (std::size_t c = 0; c < d.components.size(); ++c) {
        if (d.components[c].empty())
            throw MalformedDiagram("component " + std::to_string(c) + " has no arcs");
        for (const auto& a : d.components[c]) {
            if (!declared.contains(a))
                throw MalformedDiagram("component " + std::to_string(c) + " uses undeclared arc '" + a + "'");
            if (!placed.insert(a).second)
                throw MalformedDiagram("arc '" + a + "' appears in more than one component slot");
        }
    }
    for (const auto& a : d.arcs)
        if (!placed.contains(a))
            throw MalformedDiagram("arc '" + a + "' belongs to no component");

    const auto places = arc_places(d);
    std::map<std::string, int> as_in;
    std::map<std::string, int> as_out;
    for (std::size_t k = 0; k < d.crossings.size(); ++k) {
        const auto& x = d.crossings[k];
        const std::string where = "crossing " + std::to_string(k);
        for (const auto* a : {&x.over, &x.under_in, &x.under_out})
            if (!declared.contains(*a))
                throw MalformedDiagram(where + " names undeclared arc '" + *a + "'");
        if (x.sign != 1 && x.sign != -1)
            throw MalformedDiagram(where + " has sign " + std::to_string(x.sign));
        if (next_arc(d, places.at(x.under_in)) != x.under_out)
            throw MalformedDiagram(where + ": '" + x.under_out + "' does not follow '" + x.under_in +
                                   "' in its component");
        if (++as_in[x.under_in] > 1)
            throw MalformedDiagram("arc '" + x.under_in + "' is under-in at more than one crossing");
        if (++as_out[x.under_out] > 1)
            throw MalformedDiagram("arc '" + x.under_out + "' is under-out at more than one crossing");
    }
    for (std::size_t c = 0; c < d.components.size(); ++c) {
        const auto& comp = d.components[c];
        const bool any_under = std::any_of(comp.begin(), comp.end(), [&](const std::string& a) {
            return as_in.contains(a) || as_out.contains(a);
        });
        if (!any_under) {
            if (comp.size() != 1)
                throw MalformedDiagram("component " + std::to_string(c) +
                                       " has no undercrossings but more than one arc");
            continue;
        }
        for (const auto& a : comp)
            if (!as_in.contains(a) || !as_out.contains(a))
                throw MalformedDiagram("arc '" + a + "' is missing an undercrossing at one of its ends");
    }
    return {d.components.size(), d.crossings.size(), d.arcs.size()};
}

Presentation wirtinger(const LinkDiagram& d)
{
    validate_diagram(d);
    std::vector<Word> relators;
    relators.reserve(d.crossings.size());
    for (const auto& x : d.crossings) {
        const int e = x.sign;
        relators.push_back(
            Word{{x.under_out, 1}, {x.over, -e}, {x.under_in, -1}, {x.over, e}});
    }
    return {d.arcs, std::move(relators)};
}

Word meridian_word(const LinkDiagram& d, const std::string& arc)
{
    if (std::find(d.arcs.begin(), d.arcs.end(), arc) == d.arcs.end())
        throw UnknownArc("'" + arc + "'");
    return Word{{arc, 1}};
}

std::size_t component_of(const LinkDiagram& d, const std::string& arc)
{
    for (std::size_t c = 0; c < d.components.size(); ++c)
        if (std::find(d.components[c].begin(), d.components[c].end(), arc) != d.components[c].end())
            return c;
    throw UnknownArc("'" + arc + "'");
}

int self_writhe(const LinkDiagram& d, std::size_t component)
{
    if (component >= d.components.size())
        throw UnknownComponent(std::to_string(component));
    const auto& comp = d.components[component];
    auto mine = [&](const std::string& a) { return std::find(comp.begin(), comp.end(), a) != comp.end(); };
    int w = 0;
    for (const auto& x : d.crossings)
        if (mine(x.under_in) && mine(x.over))
            w += x.sign;
    return w;
}

Word longitude_word(const LinkDiagram& d, std::size_t component, int framing, FramingReference reference)
{
    if (component >= d.components.size())
        throw UnknownComponent(std::to_string(component) + " (diagram has " +
                               std::to_string(d.components.size()) + ")");
    validate_diagram(d);
    const auto& comp = d.components[component];
    Word w;
    for (const auto& arc : comp) {
        auto it = std::find_if(d.crossings.begin(), d.crossings.end(),
                               [&](const Crossing& x) { return x.under_in == arc; });
        if (it != d.crossings.end())
            w.push_back({it->over, it->sign});
    }
    const int twist = reference == FramingReference::blackboard ? framing
                                                                : framing - self_writhe(d, component);
    return group::free_reduce(group::concat(w, group::power(Word{{comp.front(), 1}}, twist)));
}

SurgeryRelator longitude_relator(const LinkDiagram& d, std::string label, std::size_t component, int framing)
{
    SurgeryRelator r;
    r.label = std::move(label);
    r.word = longitude_word(d, component, framing);
    r.source = SurgeryRelator::Source::longitude;
    r.component = component;
    r.framing = framing;
    return r;
}

Presentation adjoin_relators(const Presentation& p, const std::vector<SurgeryRelator>& rs)
{
    auto rels = p.relators();
    for (const auto& r : rs) {
        group::check_word_alphabet(r.word, p.generators());
        rels.push_back(r.word);
    }
    return {p.generators(), std::move(rels)};
}

} // namespace jester::links
