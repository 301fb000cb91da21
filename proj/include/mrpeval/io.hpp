#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mrpeval/mrp.hpp"

namespace mrpeval {

/// MRP JSON: {"dim", "gamma", "transition" (row-major rows), "reward",
/// "reward_noise"}. Parsing validates every Mrp invariant.
nlohmann::json mrp_to_json(const Mrp& mrp);
Mrp mrp_from_json(const nlohmann::json& j);

Mrp load_mrp(const std::filesystem::path& path);
void save_mrp(const std::filesystem::path& path, const Mrp& mrp);

/// Whole-file helpers; failures throw Error with ErrorKind::io.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace mrpeval
