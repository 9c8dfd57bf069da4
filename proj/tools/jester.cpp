// Command-line front end. JSON reports go to standard output (or --output),
// a short human summary to standard error. Exit codes: 0 checked and true,
// 1 checked and false, 2 could not check.

#include <jester/commands.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace jester;

struct GlobalFlags {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<double> identity_tol;
    std::optional<std::uint64_t> budget;
    std::optional<std::string> output;
};

io::PipelineConfig resolve(const GlobalFlags& f)
{
    io::PipelineConfig c;
    if (f.config)
        c = io::config_from_json(io::read_json(*f.config));
    if (f.seed)
        c.seed = *f.seed;
    if (f.tol)
        c.tol = *f.tol;
    if (f.identity_tol)
        c.identity_tol = *f.identity_tol;
    if (f.budget)
        c.budget = *f.budget;
    if (f.output)
        c.output = *f.output;
    if (!(c.tol > 0) || !(c.identity_tol > 0) || c.budget == 0)
        throw io::InputError("tolerances and budget must be positive");
    return c;
}

int emit(const cli::CommandResult& r, const io::PipelineConfig& c)
{
    const std::string text = r.report.dump(2) + "\n";
    if (c.output) {
        std::ofstream out(*c.output);
        if (!out) {
            std::cerr << "jester: cannot write '" << *c.output << "'\n";
            return cli::input_error;
        }
        out << text;
    } else {
        std::cout << text;
    }
    std::cerr << r.report.value("command", std::string("jester")) << ": " << r.summary << "\n";
    return r.exit_code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Checks computations on link presentations, 2-complexes and free-product sequences"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags flags;
    app.add_option("--config", flags.config, "JSON file with seed, tol, identity_tol, budget, output");
    app.add_option("--seed", flags.seed, "random seed for searches (default 1)");
    app.add_option("--tol", flags.tol, "relator residual tolerance (default 1e-9)");
    app.add_option("--identity-tol", flags.identity_tol, "nontriviality threshold (default 1e-3)");
    app.add_option("--budget", flags.budget, "search budget in states (default 1000000)");
    app.add_option("--output", flags.output, "write the JSON report to this file instead of stdout");

    cli::WirtingerArgs wirt;
    auto* wirtinger = app.add_subcommand("wirtinger", "Wirtinger presentation of a link diagram");
    wirtinger->add_option("diagram", wirt.diagram)->required();
    wirtinger->add_option("--adjoin", wirt.adjoin, "relators file (longitudes or words) to adjoin");
    wirtinger->add_flag("--abelianize", wirt.abelianize, "report invariant factors");

    cli::RepVerifyArgs repv;
    auto* rep = app.add_subcommand("rep", "Representations into the isometries of the hyperbolic plane");
    rep->require_subcommand(1);
    auto* verify = rep->add_subcommand("verify", "Check that an assignment kills every relator");
    verify->add_option("--presentation", repv.presentation)->required();
    verify->add_option("--assignment", repv.assignment)->required();

    cli::CollapseArgs coll;
    auto* collapse = app.add_subcommand("collapse", "Decide collapsibility of a simplicial complex");
    collapse->add_option("complex", coll.complex)->required();

    cli::SplitArgs spl;
    auto* split = app.add_subcommand("split", "Check K = A u B with A, B and A n B collapsible");
    split->add_option("complex", spl.complex)->required();
    split->add_option("--a", spl.a, "triangle ids of A")->required();
    split->add_option("--b", spl.b, "triangle ids of B")->required();

    cli::PolygonArgs poly;
    auto* polygon = app.add_subcommand("polygon", "Triangulate a polygon with side identifications");
    polygon->add_option("polygon", poly.polygon)->required();
    polygon->add_option("--complex-out", poly.complex_out, "write the complex file here");
    polygon->add_flag("--search-splits", poly.search_splits, "search sector splits A u B");
    polygon->add_option("--a-out", poly.a_out, "write triangle ids of A for the most balanced split");
    polygon->add_option("--b-out", poly.b_out, "write triangle ids of B for the most balanced split");

    cli::ProIsoArgs pro;
    auto* proiso = app.add_subcommand("proiso", "Pro-isomorphism of free-product sequences");
    proiso->add_option("a", pro.a)->required();
    proiso->add_option("b", pro.b)->required();
    proiso->add_option("--refute-depth", pro.refute_depth, "ladder depth for the bounded refutation (0 = skip)");
    proiso->add_option("--ladder-depth", pro.ladder_depth, "depth of the verified ladder for positive answers");

    cli::MazurArgs maz;
    auto* mazur = app.add_subcommand("mazur", "Full pipeline: diagram, surgery relators, representation");
    mazur->add_option("diagram", maz.diagram)->required();
    mazur->add_option("relators", maz.relators)->required();
    mazur->add_option("--rep", maz.rep, "representation file (triangle, images, arc seeds)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::input_error;
    }

    io::PipelineConfig config;
    try {
        config = resolve(flags);
    } catch (const jester::Error& e) {
        std::cerr << "jester: " << e.what() << "\n";
        return cli::input_error;
    }

    if (*wirtinger)
        return emit(cli::cmd_wirtinger(wirt, config), config);
    if (*verify)
        return emit(cli::cmd_rep_verify(repv, config), config);
    if (*collapse)
        return emit(cli::cmd_collapse(coll, config), config);
    if (*split)
        return emit(cli::cmd_split(spl, config), config);
    if (*polygon)
        return emit(cli::cmd_polygon(poly, config), config);
    if (*proiso)
        return emit(cli::cmd_proiso(pro, config), config);
    if (*mazur)
        return emit(cli::cmd_mazur_pipeline(maz, config), config);
    return cli::input_error;
}
