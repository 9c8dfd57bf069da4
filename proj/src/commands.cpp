#include <jester/commands.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace jester::cli {

namespace {

using io::Json;

/// A stage that could not run; becomes exit code 2 naming the stage.
struct StageFailure {
    std::string stage;
    std::string message;
};

/// Report under construction: inputs with content hashes, tolerances, and
/// the stage currently running.
class Run {
public:
    Run(std::string command, const io::PipelineConfig& config) : config_(config)
    {
        report_["command"] = std::move(command);
        report_["inputs"] = Json::array();
        report_["config"] = io::to_json(config);
    }

    template <class F>
    auto stage(const std::string& name, F&& f)
    {
        try {
            return f();
        } catch (const Error& e) {
            throw StageFailure{name, e.what()};
        } catch (const nlohmann::json::exception& e) {
            throw StageFailure{name, e.what()};
        }
    }

    /// Reads and hashes an input file, then parses it as JSON.
    Json input(const std::string& role, const std::string& path)
    {
        return stage("parse_input", [&] {
            const std::string bytes = io::read_file(path);
            report_["inputs"].push_back(Json{{"role", role}, {"path", path}, {"sha256", io::sha256_hex(bytes)}});
            try {
                return Json::parse(bytes);
            } catch (const nlohmann::json::parse_error& e) {
                throw io::InputError("'" + path + "' is not valid JSON: " + e.what());
            }
        });
    }

    Json& operator[](const char* key) { return report_[key]; }
    Json& report() { return report_; }
    const io::PipelineConfig& config() const { return config_; }

    CommandResult finish(int code, std::string verdict, std::string summary)
    {
        report_["verdict"] = verdict;
        report_["exit_code"] = code;
        return {code, std::move(report_), std::move(summary)};
    }

private:
    Json report_;
    const io::PipelineConfig& config_;
};

template <class F>
CommandResult guarded(Run& run, F&& body)
{
    try {
        return body();
    } catch (const StageFailure& f) {
        run["stage"] = f.stage;
        run["error"] = f.message;
        return run.finish(input_error, "input_error", "error in stage " + f.stage + ": " + f.message);
    }
}

Json integer(const group::BigInt& v)
{
    if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
        return Json(static_cast<long long>(v));
    return Json(v.str());
}

Json factors_json(const std::vector<group::BigInt>& f)
{
    Json out = Json::array();
    for (const auto& x : f)
        out.push_back(integer(x));
    return out;
}

std::string factors_text(const std::vector<group::BigInt>& f)
{
    if (f.empty())
        return "trivial";
    std::string s;
    for (const auto& x : f)
        s += (s.empty() ? "" : " + ") + (x == 0 ? std::string("Z") : "Z/" + x.str());
    return s;
}

Json relator_strings(const group::Presentation& p)
{
    Json out = Json::array();
    for (const auto& r : p.relators())
        out.push_back(group::to_string(r));
    return out;
}

Json collapse_json(const complexes::SimplicialComplex& k, const complexes::CollapseResult& r, bool verified)
{
    Json j{{"verdict", complexes::to_string(r.verdict)},
           {"reason", complexes::to_string(r.reason)},
           {"states", r.states},
           {"simplices", k.size()},
           {"euler_characteristic", complexes::euler_characteristic(k)}};
    if (r.sequence) {
        j["sequence_length"] = r.sequence->steps.size();
        j["sequence_verified"] = verified;
        Json steps = Json::array();
        for (const auto& s : r.sequence->steps)
            steps.push_back(Json::array({k.names(s.face), k.names(s.coface)}));
        j["sequence"] = steps;
    }
    return j;
}

complexes::CollapseOptions collapse_options(const io::PipelineConfig& c)
{
    complexes::CollapseOptions o;
    o.budget = c.budget;
    o.seed = c.seed;
    return o;
}

void write_json_file(const std::string& path, const Json& j)
{
    std::ofstream out(path);
    if (!out)
        throw io::InputError("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

} // namespace

// ---------------------------------------------------------------------------

CommandResult cmd_wirtinger(const WirtingerArgs& args, const io::PipelineConfig& config)
{
    Run run("wirtinger", config);
    return guarded(run, [&] {
        const Json dj = run.input("diagram", args.diagram);
        const auto d = run.stage("parse_input", [&] { return io::diagram_from_json(dj); });
        const auto rep = run.stage("validate_diagram", [&] { return links::validate_diagram(d); });
        run["diagram"] = Json{{"components", rep.components}, {"crossings", rep.crossings}, {"arcs", rep.arcs}};
        auto p = run.stage("wirtinger", [&] { return links::wirtinger(d); });
        std::string summary = std::to_string(p.generators().size()) + " generators, " +
                              std::to_string(p.relators().size()) + " relators";
        if (args.adjoin) {
            const Json rj = run.input("relators", *args.adjoin);
            const auto rels = run.stage("parse_relators", [&] { return io::relators_from_json(rj, d); });
            p = run.stage("adjoin_relators", [&] { return links::adjoin_relators(p, rels); });
            Json labels = Json::array();
            for (const auto& r : rels)
                labels.push_back(Json{{"label", r.label}, {"word", group::to_string(r.word)}});
            run["adjoined"] = labels;
            summary += ", " + std::to_string(rels.size()) + " adjoined";
        }
        run["presentation"] = io::to_json(p);
        run["relators_text"] = relator_strings(p);
        if (args.abelianize) {
            const auto ab = run.stage("abelianization", [&] { return group::abelianization(p); });
            run["abelianization"] = factors_json(ab);
            summary += "; abelianization " + factors_text(ab);
        }
        return run.finish(ok, "ok", summary);
    });
}

CommandResult cmd_rep_verify(const RepVerifyArgs& args, const io::PipelineConfig& config)
{
    Run run("rep verify", config);
    return guarded(run, [&] {
        const Json pj = run.input("presentation", args.presentation);
        const Json aj = run.input("assignment", args.assignment);
        const auto p = run.stage("parse_input", [&] { return io::presentation_from_json(pj); });
        const auto a = run.stage("parse_input", [&] { return io::assignment_from_json(aj); });
        const auto rep = run.stage("verify_homomorphism",
                                   [&] { return group::verify_homomorphism(p, a.images, config.tol); });
        Json residuals = Json::array();
        for (std::size_t i = 0; i < p.relators().size(); ++i)
            residuals.push_back(Json{{"relator", group::to_string(p.relators()[i])}, {"residual", rep.residuals[i]}});
        run["triangle"] = Json::array({a.triangle.p, a.triangle.q, a.triangle.r});
        run["residuals"] = residuals;
        run["holds"] = rep.holds;
        double worst = 0;
        for (double r : rep.residuals)
            worst = std::max(worst, r);
        std::ostringstream s;
        s << (rep.holds ? "homomorphism holds" : "homomorphism FAILS") << " (max residual " << worst << ", tol "
          << config.tol << ")";
        return run.finish(rep.holds ? ok : checked_false, rep.holds ? "holds" : "fails", s.str());
    });
}

CommandResult cmd_collapse(const CollapseArgs& args, const io::PipelineConfig& config)
{
    Run run("collapse", config);
    return guarded(run, [&] {
        const Json kj = run.input("complex", args.complex);
        const auto k = run.stage("parse_input", [&] { return io::complex_from_json(kj); });
        const auto r = run.stage("collapse_search", [&] { return complexes::is_collapsible(k, collapse_options(config)); });
        const bool verified = r.sequence && complexes::verify_collapse_sequence(k, *r.sequence);
        run["free_faces"] = complexes::free_faces(k).size();
        run["result"] = collapse_json(k, r, verified);
        using V = complexes::CollapseResult::Verdict;
        switch (r.verdict) {
        case V::collapsible:
            if (!verified)
                return run.finish(checked_false, "sequence_rejected", "search returned a sequence that fails verification");
            return run.finish(ok, "collapsible",
                              "collapsible (" + std::to_string(r.sequence->steps.size()) + " verified steps)");
        case V::not_collapsible:
            return run.finish(checked_false, "not_collapsible", "not collapsible: " + complexes::to_string(r.reason));
        case V::budget_exceeded: break;
        }
        run["stage"] = "collapse_search";
        return run.finish(input_error, "budget_exceeded",
                          "inconclusive: budget of " + std::to_string(config.budget) + " states exhausted");
    });
}

CommandResult cmd_split(const SplitArgs& args, const io::PipelineConfig& config)
{
    Run run("split", config);
    return guarded(run, [&] {
        const Json kj = run.input("complex", args.complex);
        const Json aj = run.input("a", args.a);
        const Json bj = run.input("b", args.b);
        const auto k = run.stage("parse_input", [&] { return io::complex_from_json(kj); });
        const auto listed = run.stage("parse_input", [&] { return io::listed_simplices(kj, k); });
        auto pick = [&](const Json& ids_json) {
            std::vector<complexes::Simplex> out;
            for (std::size_t id : io::ids_from_json(ids_json)) {
                if (id >= listed.size())
                    throw io::InputError("triangle id " + std::to_string(id) + " out of range (complex lists " +
                                         std::to_string(listed.size()) + ")");
                out.push_back(listed[id]);
            }
            return out;
        };
        const auto a = run.stage("parse_input", [&] { return pick(aj); });
        const auto b = run.stage("parse_input", [&] { return pick(bj); });
        const auto r = run.stage("split_check", [&] { return complexes::split_check(k, a, b, collapse_options(config)); });
        auto part = [&](const complexes::SimplicialComplex& x, const complexes::CollapseResult& cr) {
            return collapse_json(x, cr, cr.sequence && complexes::verify_collapse_sequence(x, *cr.sequence));
        };
        run["union_ok"] = r.union_ok;
        run["a"] = part(r.a, r.a_result);
        run["b"] = part(r.b, r.b_result);
        run["c"] = part(r.c, r.c_result);
        using V = complexes::CollapseResult::Verdict;
        bool verified = true;
        bool any_budget = false;
        bool any_negative = !r.union_ok;
        for (const auto* x : {&r.a_result, &r.b_result, &r.c_result}) {
            any_budget = any_budget || x->verdict == V::budget_exceeded;
            any_negative = any_negative || x->verdict == V::not_collapsible;
        }
        for (const char* key : {"a", "b", "c"})
            if (run[key].contains("sequence_verified"))
                verified = verified && run[key]["sequence_verified"].get<bool>();
        if (r.all_collapsible() && verified)
            return run.finish(ok, "split_ok", "A, B and C = A n B all collapse (sequences verified)");
        if (any_negative || !verified)
            return run.finish(checked_false, "split_fails",
                              r.union_ok ? "some part is not collapsible" : "A and B do not cover the complex");
        (void)any_budget;
        run["stage"] = "collapse_search";
        return run.finish(input_error, "budget_exceeded", "inconclusive: collapse search ran out of budget");
    });
}

CommandResult cmd_polygon(const PolygonArgs& args, const io::PipelineConfig& config)
{
    Run run("polygon", config);
    return guarded(run, [&] {
        const Json pj = run.input("polygon", args.polygon);
        const auto poly = run.stage("parse_input", [&] { return io::polygon_from_json(pj); });
        const auto pc = run.stage("build_complex", [&] { return complexes::polygon_identification_complex(poly); });
        const auto& k = pc.complex;
        const auto counts = k.counts_by_dimension();
        std::size_t free_edges = 0;
        const auto free = complexes::free_faces(k);
        for (const auto& f : free)
            if (f.face.size() == 2)
                ++free_edges;
        run["vertices"] = counts.size() > 0 ? counts[0] : 0;
        run["edges"] = counts.size() > 1 ? counts[1] : 0;
        run["triangles"] = counts.size() > 2 ? counts[2] : 0;
        run["euler_characteristic"] = complexes::euler_characteristic(k);
        run["free_faces"] = free.size();
        run["free_edges"] = free_edges;
        run["half_sectors"] = pc.half_sector_count;
        if (args.complex_out) {
            Json simplices = Json::array();
            for (const auto& t : pc.triangles)
                simplices.push_back(k.names(t));
            run.stage("write_output",
                      [&] { write_json_file(*args.complex_out, Json{{"vertices", k.vertices()}, {"simplices", simplices}}); });
        }
        std::string summary = "chi = " + std::to_string(complexes::euler_characteristic(k)) + ", " +
                              std::to_string(pc.triangles.size()) + " triangles, " + std::to_string(free.size()) +
                              " free faces";
        if (args.search_splits) {
            auto opts = collapse_options(config);
            const auto splits = run.stage("split_search", [&] { return complexes::search_sector_splits(pc, opts); });
            Json found = Json::array();
            for (const auto& s : splits)
                found.push_back(Json{{"first", s.first}, {"length", s.length}});
            run["splits"] = found;
            summary += ", " + std::to_string(splits.size()) + " sector splits";
            if (!splits.empty() && (args.a_out || args.b_out)) {
                // Prefer the most balanced split, i.e. a cut through the cone point.
                const std::size_t h = pc.half_sector_count;
                auto imbalance = [&](const complexes::SectorSplit& x) {
                    return x.length > h - x.length ? 2 * x.length - h : h - 2 * x.length;
                };
                const auto& s = *std::min_element(splits.begin(), splits.end(), [&](const auto& x, const auto& y) {
                    return imbalance(x) < imbalance(y);
                });
                run["written_split"] = Json{{"first", s.first}, {"length", s.length}};
                auto ids = [&](std::size_t first, std::size_t length) {
                    Json out = Json::array();
                    for (std::size_t t = 0; t < pc.triangles.size(); ++t)
                        if ((static_cast<std::size_t>(pc.half_sector[t]) + h - first % h) % h < length)
                            out.push_back(t);
                    return Json{{"triangles", out}};
                };
                run.stage("write_output", [&] {
                    if (args.a_out)
                        write_json_file(*args.a_out, ids(s.first, s.length));
                    if (args.b_out)
                        write_json_file(*args.b_out, ids((s.first + s.length) % h, h - s.length));
                });
            }
        }
        return run.finish(ok, "built", summary);
    });
}

CommandResult cmd_proiso(const ProIsoArgs& args, const io::PipelineConfig& config)
{
    Run run("proiso", config);
    return guarded(run, [&] {
        const Json aj = run.input("a", args.a);
        const Json bj = run.input("b", args.b);
        const auto sa = run.stage("parse_input", [&] { return io::sequence_from_json(aj); });
        const auto sb = run.stage("parse_input", [&] { return io::sequence_from_json(bj); });
        const auto r = run.stage("pro_isomorphic", [&] { return pro::pro_isomorphic(sa, sb); });
        run["decision"] = r.decision;
        if (r.decision) {
            Json matching = Json::array();
            for (const auto& c : r.matching)
                matching.push_back(Json{{"labels_a", c.labels_a},
                                        {"labels_b", c.labels_b},
                                        {"multiplicity", pro::to_string(c.multiplicity)}});
            run["matching"] = matching;
            const auto ladder =
                run.stage("build_ladder", [&] { return pro::build_ladder_from_matching(sa, sb, r, args.ladder_depth); });
            const auto check = run.stage("ladder_verify", [&] { return pro::ladder_verify(sa, sb, ladder, args.ladder_depth); });
            run["ladder"] = Json{{"depth", args.ladder_depth}, {"j", ladder.j}, {"k", ladder.k}, {"verified", check.holds}};
            if (!check.holds) {
                run["ladder"]["failure"] = check.failure;
                return run.finish(checked_false, "certificate_rejected", "matching found but its ladder fails: " + check.failure);
            }
            return run.finish(ok, "pro_isomorphic",
                              "pro-isomorphic; ladder of depth " + std::to_string(args.ladder_depth) + " verified");
        }
        const auto& d = *r.distinguishing;
        run["distinguishing"] =
            Json{{"label", d.label}, {"multiplicity_a", pro::to_string(d.in_a)}, {"multiplicity_b", pro::to_string(d.in_b)}};
        std::string summary = "not pro-isomorphic: factor " + d.label + " appears " + pro::to_string(d.in_a) +
                              " times in A and " + pro::to_string(d.in_b) + " times in B";
        if (args.refute_depth >= 2) {
            pro::RefutationOptions opts;
            opts.depth = args.refute_depth;
            opts.budget = config.budget * 5;
            const auto ref = run.stage("refute_ladders", [&] { return pro::refute_ladders(sa, sb, r, opts); });
            run["refutation"] = Json{{"depth", args.refute_depth},
                                     {"outcome", pro::to_string(ref.outcome)},
                                     {"index_tuples", ref.index_tuples},
                                     {"nodes", ref.nodes}};
            summary += "; bounded ladder search: " + pro::to_string(ref.outcome);
        }
        return run.finish(checked_false, "not_pro_isomorphic", summary);
    });
}

// ---------------------------------------------------------------------------

CommandResult cmd_mazur_pipeline(const MazurArgs& args, const io::PipelineConfig& config)
{
    Run run("mazur", config);
    return guarded(run, [&] {
        const Json dj = run.input("diagram", args.diagram);
        const Json rj = run.input("relators", args.relators);
        std::optional<Json> repj;
        if (args.rep)
            repj = run.input("representation", *args.rep);

        const auto d = run.stage("parse_input", [&] { return io::diagram_from_json(dj); });
        const auto diag = run.stage("validate_diagram", [&] { return links::validate_diagram(d); });
        run["diagram"] = Json{{"components", diag.components}, {"crossings", diag.crossings}, {"arcs", diag.arcs}};

        const auto w = run.stage("wirtinger", [&] { return links::wirtinger(d); });
        run["wirtinger"] = Json{{"generators", w.generators().size()}, {"relators", w.relators().size()}};

        const auto rels = run.stage("adjoin_relators", [&] { return io::relators_from_json(rj, d); });
        const auto full = run.stage("adjoin_relators", [&] { return links::adjoin_relators(w, rels); });
        Json adjoined = Json::array();
        for (const auto& r : rels)
            adjoined.push_back(Json{{"label", r.label}, {"word", group::to_string(r.word)}});
        run["adjoined"] = adjoined;
        run["presentation"] = Json{{"generators", full.generators()}, {"relators", relator_strings(full)}};

        const auto ab = run.stage("abelianization", [&] { return group::abelianization(full); });
        run["abelianization"] = Json{{"factors", factors_json(ab)}, {"trivial", ab.empty()}};
        std::string summary = std::to_string(full.generators().size()) + " generators, " +
                              std::to_string(full.relators().size()) + " relators; abelianization " + factors_text(ab);

        if (!repj) {
            run["representation"] = "skipped";
            return run.finish(ok, "not_evaluated", summary + "; representation skipped");
        }
        const auto spec = run.stage("parse_input", [&] { return io::rep_spec_from_json(*repj); });
        const auto& images = spec.assignment.images;

        // Representation of the quotient group.
        const auto hom = run.stage("rep_verify", [&] { return group::verify_homomorphism(spec.quotient, images, config.tol); });
        Json qres = Json::array();
        for (std::size_t i = 0; i < spec.quotient.relators().size(); ++i)
            qres.push_back(Json{{"relator", group::to_string(spec.quotient.relators()[i])}, {"residual", hom.residuals[i]}});
        run["quotient"] = Json{{"presentation", relator_strings(spec.quotient)}, {"residuals", qres}, {"holds", hom.holds}};
        if (!hom.holds)
            return run.finish(checked_false, "representation_fails", summary + "; quotient relators fail under h");

        // Images of the arcs, propagated through the crossings from the seeds
        // as exact words in the quotient generators. Each relator image is
        // shortened with the quotient's power relators before it is evaluated
        // numerically, so rounding error does not grow with word length.
        const auto orders = group::power_relator_orders(spec.quotient);
        const auto arc_words = run.stage("arc_images", [&] {
            group::WordAssignment defs;
            for (const auto& g : spec.quotient.generators())
                defs[g] = group::Word{{g, 1}};
            for (const auto& [name, word] : spec.definitions)
                defs.emplace(name, group::substitute(word, defs));
            std::map<std::string, group::Word> seeds;
            for (const auto& [arc, word] : spec.arc_seeds)
                seeds.emplace(arc, group::reduce_powers(group::substitute(word, defs), orders));
            auto words = links::propagate_arc_images(d, seeds);
            for (auto& [arc, word] : words)
                word = group::reduce_powers(word, orders);
            return words;
        });
        Json seeds_json = Json::object();
        for (const auto& [arc, word] : spec.arc_seeds)
            seeds_json[arc] = group::to_string(word);
        run["arc_seeds"] = seeds_json;
        Json arc_json = Json::object();
        for (const auto& [arc, word] : arc_words)
            arc_json[arc] = group::to_string(word);
        run["arc_images"] = arc_json;

        Json fres = Json::array();
        double worst = 0;
        bool holds = true;
        run.stage("relator_residuals", [&] {
            for (std::size_t i = 0; i < full.relators().size(); ++i) {
                const std::string label =
                    i < w.relators().size() ? "r" + std::to_string(i + 1) : rels[i - w.relators().size()].label;
                const auto word = group::reduce_powers(group::substitute(full.relators()[i], arc_words), orders);
                const double r = hyperbolic::distance_from_identity(group::evaluate(word, images));
                fres.push_back(Json{{"label", label}, {"reduced_length", word.size()}, {"residual", r}});
                worst = std::max(worst, r);
                holds = holds && r < config.tol;
            }
        });
        run["relator_residuals"] = Json{{"residuals", fres}, {"max", worst}, {"holds", holds}};
        if (!holds)
            return run.finish(checked_false, "relators_fail", summary + "; some relator is not killed by h");

        // Nontriviality of the meridian.
        const auto m = run.stage("nontriviality", [&] {
            if (!arc_words.contains(spec.meridian))
                throw links::UnknownArc("'" + spec.meridian + "'");
            return group::evaluate(arc_words.at(spec.meridian), images);
        });
        const double dist = hyperbolic::distance_from_identity(m);
        const auto cls = run.stage("nontriviality", [&] { return hyperbolic::classify(m); });
        Json nt{{"arc", spec.meridian},
                {"distance_from_identity", dist},
                {"identity_tol", config.identity_tol},
                {"kind", hyperbolic::to_string(cls.kind)},
                {"trace", cls.trace},
                {"value", cls.value}};
        if (spec.expected_meridian) {
            const auto e = run.stage("nontriviality", [&] {
                group::WordAssignment defs;
                for (const auto& g : spec.quotient.generators())
                    defs[g] = group::Word{{g, 1}};
                for (const auto& [name, word] : spec.definitions)
                    defs.emplace(name, group::substitute(word, defs));
                return group::evaluate(group::substitute(*spec.expected_meridian, defs), images);
            });
            const double agree = hyperbolic::distance_from_identity(e.inverse() * m);
            nt["expected_word"] = group::to_string(*spec.expected_meridian);
            nt["expected_agreement"] = agree;
            if (!(agree < config.tol)) {
                run["nontriviality"] = nt;
                return run.finish(checked_false, "meridian_mismatch", summary + "; h(meridian) differs from the expected word");
            }
        }
        run["nontriviality"] = nt;
        const bool nontrivial = !hyperbolic::is_identity(m, config.identity_tol);
        std::ostringstream s;
        s << summary << "; max relator residual " << worst << "; h(" << spec.meridian << ") "
          << (nontrivial ? "is NOT the identity" : "is the identity") << " (distance " << dist << ")";
        return run.finish(nontrivial ? ok : checked_false, nontrivial ? "nontrivial" : "trivial", s.str());
    });
}

} // namespace jester::cli
