#pragma once

#include <jester/io.hpp>

#include <optional>
#include <string>

namespace jester::cli {

/// Exit codes shared by every command.
enum ExitCode : int {
    ok = 0,             ///< checked and true
    checked_false = 1,  ///< checked and false
    input_error = 2,    ///< could not check: bad input, or a search ran out of budget
};

struct CommandResult {
    int exit_code = ok;
    io::Json report;      ///< machine-readable, deterministic given inputs and seed
    std::string summary;  ///< one or two human-readable lines
};

struct WirtingerArgs {
    std::string diagram;
    std::optional<std::string> adjoin;
    bool abelianize = false;
};

struct RepVerifyArgs {
    std::string presentation;
    std::string assignment;
};

struct CollapseArgs {
    std::string complex;
};

struct SplitArgs {
    std::string complex;
    std::string a;
    std::string b;
};

struct PolygonArgs {
    std::string polygon;
    std::optional<std::string> complex_out;
    bool search_splits = false;
    std::optional<std::string> a_out;  ///< ids of the first split found
    std::optional<std::string> b_out;
};

struct ProIsoArgs {
    std::string a;
    std::string b;
    std::size_t refute_depth = 3;
    std::size_t ladder_depth = 4;
};

struct MazurArgs {
    std::string diagram;
    std::string relators;
    std::optional<std::string> rep;
};

CommandResult cmd_wirtinger(const WirtingerArgs& args, const io::PipelineConfig& config);
CommandResult cmd_rep_verify(const RepVerifyArgs& args, const io::PipelineConfig& config);
CommandResult cmd_collapse(const CollapseArgs& args, const io::PipelineConfig& config);
CommandResult cmd_split(const SplitArgs& args, const io::PipelineConfig& config);
CommandResult cmd_polygon(const PolygonArgs& args, const io::PipelineConfig& config);
CommandResult cmd_proiso(const ProIsoArgs& args, const io::PipelineConfig& config);
CommandResult cmd_mazur_pipeline(const MazurArgs& args, const io::PipelineConfig& config);

} // namespace jester::cli
