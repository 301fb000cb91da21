#include <fstream>
#include <sstream>

#include "mrpeval/error.hpp"
#include "mrpeval/io.hpp"

namespace mrpeval {

nlohmann::json mrp_to_json(const Mrp& mrp) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < mrp.dim(); ++i) {
    const auto r = mrp.transition().row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {{"dim", mrp.dim()},
          {"gamma", mrp.gamma()},
          {"transition", rows},
          {"reward", mrp.reward()},
          {"reward_noise", mrp.reward_noise()}};
}

Mrp mrp_from_json(const nlohmann::json& j) {
  for (const char* key : {"dim", "gamma", "transition", "reward", "reward_noise"}) {
    require(j.contains(key), "mrp_json.missing_field", std::string("MRP JSON lacks field \"") + key + "\"");
  }
  try {
    const auto dim = j.at("dim").get<std::size_t>();
    auto rows = j.at("transition").get<std::vector<std::vector<double>>>();
    auto reward = j.at("reward").get<std::vector<double>>();
    auto noise = j.at("reward_noise").get<std::vector<double>>();
    require(dim >= 1 && rows.size() == dim && reward.size() == dim && noise.size() == dim,
            "mrp_json.dimension_mismatch", "field lengths do not match dim = " + std::to_string(dim));
    return Mrp(Matrix::from_rows(rows), std::move(reward), std::move(noise), j.at("gamma").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw Error("mrp_json.type_error", std::string("malformed MRP JSON: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io.open_failed", "cannot open " + path.string(), ErrorKind::io);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io.open_failed", "cannot write " + path.string(), ErrorKind::io);
  out << contents;
  if (!out) throw Error("io.write_failed", "write failed for " + path.string(), ErrorKind::io);
}

Mrp load_mrp(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("mrp_json.parse_error", path.string() + ": " + e.what());
  }
  return mrp_from_json(j);
}

void save_mrp(const std::filesystem::path& path, const Mrp& mrp) {
  write_text_file(path, mrp_to_json(mrp).dump(2) + "\n");
}

}  // namespace mrpeval
