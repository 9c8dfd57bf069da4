#include "support.hpp"

#include <jester/commands.hpp>

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace jester;
using namespace jester::cli;
using jester::testing::data_path;

namespace {

const io::PipelineConfig config{};

std::string scratch_file(const std::string& name, const std::string& content)
{
    const auto dir = std::filesystem::temp_directory_path() / "jester_command_tests";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream(path) << content;
    return path.string();
}

} // namespace

TEST_CASE("mazur pipeline on the shipped inputs")
{
    const auto r = cmd_mazur_pipeline({data_path("mazur_link.json"), data_path("mazur_relators.json"),
                                       data_path("mazur_rep.json")},
                                      config);
    CHECK(r.exit_code == ok);
    CHECK(r.report["verdict"] == "nontrivial");
    CHECK(r.report["abelianization"]["trivial"] == true);
    CHECK(r.report["wirtinger"]["generators"] == 9);
    CHECK(r.report["wirtinger"]["relators"] == 9);
    CHECK(r.report["relator_residuals"]["residuals"].size() == 11);
    for (const auto& x : r.report["relator_residuals"]["residuals"])
        CHECK(x["residual"].get<double>() < 1e-9);
    CHECK(r.report["nontriviality"]["distance_from_identity"].get<double>() >= 0.1);
    CHECK(r.report["inputs"].size() == 3);
    CHECK(r.report["inputs"][0]["sha256"].get<std::string>().size() == 64);
    CHECK(r.report["config"]["tol"] == 1e-9);

    // Deterministic given inputs and seed.
    const auto again = cmd_mazur_pipeline({data_path("mazur_link.json"), data_path("mazur_relators.json"),
                                           data_path("mazur_rep.json")},
                                          config);
    CHECK(again.report.dump() == r.report.dump());
}

TEST_CASE("mazur pipeline on the unknot skips the representation")
{
    const auto r = cmd_mazur_pipeline({data_path("unknot.json"), data_path("unknot_relators.json"), std::nullopt}, config);
    CHECK(r.exit_code == ok);
    CHECK(r.report["abelianization"]["factors"] == io::Json::array({0}));
    CHECK(r.report["representation"] == "skipped");
}

TEST_CASE("mazur pipeline names the failing stage")
{
    const auto broken = scratch_file("broken_diagram.json",
                                     R"({"arcs":["x1","x2"],"components":[["x1","x2"]],"crossings":[)"
                                     R"({"over":"x1","under_in":"x1","under_out":"x2","sign":1}]})");
    const auto r = cmd_mazur_pipeline({broken, data_path("mazur_relators.json"), data_path("mazur_rep.json")}, config);
    CHECK(r.exit_code == input_error);
    CHECK(r.report["stage"] == "validate_diagram");

    const auto garbage = scratch_file("garbage.json", "{not json");
    const auto g = cmd_mazur_pipeline({garbage, data_path("mazur_relators.json"), std::nullopt}, config);
    CHECK(g.exit_code == input_error);
    CHECK(g.report["stage"] == "parse_input");

    const auto missing = cmd_mazur_pipeline({data_path("nope.json"), data_path("mazur_relators.json"), std::nullopt}, config);
    CHECK(missing.exit_code == input_error);
}

TEST_CASE("mazur pipeline with a representation that fails")
{
    auto spec = io::read_json(data_path("mazur_rep.json"));
    spec["generators"]["gamma"]["rotation"]["pi_times"] = io::Json::array({2, 7});
    const auto path = scratch_file("mixed_signs.json", spec.dump());
    const auto r = cmd_mazur_pipeline({data_path("mazur_link.json"), data_path("mazur_relators.json"), path}, config);
    CHECK(r.exit_code == checked_false);
    CHECK(r.report["verdict"] == "representation_fails");
}

TEST_CASE("wirtinger command")
{
    const auto r = cmd_wirtinger({data_path("mazur_link.json"), data_path("mazur_relators.json"), true}, config);
    CHECK(r.exit_code == ok);
    CHECK(r.report["presentation"]["relators"].size() == 11);
    CHECK(r.report["abelianization"].empty());
    const auto t = cmd_wirtinger({data_path("trefoil.json"), std::nullopt, true}, config);
    CHECK(t.report["abelianization"] == io::Json::array({0}));
}

TEST_CASE("rep verify command")
{
    const auto r = cmd_rep_verify({data_path("quotient_presentation.json"), data_path("quotient_assignment.json")}, config);
    CHECK(r.exit_code == ok);
    CHECK(r.report["holds"] == true);
    auto a = io::read_json(data_path("quotient_assignment.json"));
    a["generators"]["beta"]["rotation"]["pi_times"] = io::Json::array({2, 5});
    const auto bad = cmd_rep_verify({data_path("quotient_presentation.json"), scratch_file("flipped.json", a.dump())}, config);
    CHECK(bad.exit_code == checked_false);
}

TEST_CASE("collapse and split commands")
{
    const auto dunce = cmd_collapse({data_path("dunce_hat.json")}, config);
    CHECK(dunce.exit_code == checked_false);
    CHECK(dunce.report["result"]["reason"] == "no free face");

    const auto split = cmd_split({data_path("jester_hat.json"), data_path("jester_A.json"), data_path("jester_B.json")}, config);
    CHECK(split.exit_code == ok);
    for (const char* part : {"a", "b", "c"})
        CHECK(split.report[part]["sequence_verified"] == true);

    const auto bad_ids = cmd_split({data_path("jester_hat.json"), scratch_file("ids.json", R"({"triangles":[999]})"),
                                    data_path("jester_B.json")},
                                   config);
    CHECK(bad_ids.exit_code == input_error);

    // The dunce hat with a pendant triangle needs the exhaustive search:
    // out of budget it cannot be decided, with budget it is proven negative.
    const auto pc = complexes::polygon_identification_complex(
        io::polygon_from_json(io::read_json(data_path("dunce_hat_polygon.json"))));
    io::Json k{{"vertices", pc.complex.vertices()}, {"simplices", io::Json::array()}};
    k["vertices"].push_back("extra");
    for (const auto& t : pc.triangles)
        k["simplices"].push_back(pc.complex.names(t));
    const auto edge = pc.complex.names({pc.triangles[0][0], pc.triangles[0][1]});
    k["simplices"].push_back(io::Json::array({edge[0], edge[1], "extra"}));
    const auto path = scratch_file("pendant.json", k.dump());
    io::PipelineConfig tiny;
    tiny.budget = 1;
    const auto budget = cmd_collapse({path}, tiny);
    CHECK(budget.exit_code == input_error);
    CHECK(budget.report["verdict"] == "budget_exceeded");
    const auto full = cmd_collapse({path}, config);
    CHECK(full.exit_code == checked_false);
    CHECK(full.report["result"]["reason"] == "search exhausted");
}

TEST_CASE("proiso command")
{
    const auto no = cmd_proiso({data_path("seq_z5_inf.json"), data_path("seq_z5_none.json")}, config);
    CHECK(no.exit_code == checked_false);
    CHECK(no.report["distinguishing"]["label"] == "Z5");
    CHECK(no.report["refutation"]["outcome"] == "refuted");
    const auto yes = cmd_proiso({data_path("seq_alt23.json"), data_path("seq_alt32.json")}, config);
    CHECK(yes.exit_code == ok);
    CHECK(yes.report["ladder"]["verified"] == true);
}
