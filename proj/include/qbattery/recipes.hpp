#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qbattery/commands.hpp"

namespace qbattery {

/// One output file of a recipe.
struct RecipeJob {
    std::string file_stem;
    Command command;
    RunConfig config;
};

struct RecipeOptions {
    std::filesystem::path output_dir = ".";
    OutputFormat format = OutputFormat::Csv;
    std::size_t workers = 1;
    std::optional<std::size_t> realizations;  // fig7 / fig8
    std::optional<std::uint64_t> seed;
    std::vector<double> sigmas{0.0, 0.5, 1.0};  // fig7 / fig8 disorder strengths
};

const std::vector<std::string>& recipe_names();

/// The stored jobs for `name`; unknown names throw ValidationError.
std::vector<RecipeJob> recipe_jobs(const std::string& name, const RecipeOptions& options = {});

/// Runs every job and writes <output_dir>/<file_stem>.<csv|json>. Progress
/// lines go to `log`. Returns the written paths.
std::vector<std::filesystem::path> run_recipe(const std::string& name, const RecipeOptions& options,
                                              std::ostream& log);

}  // namespace qbattery
