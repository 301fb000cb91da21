#include <charconv>
#include <sstream>

#include "mrpeval/error.hpp"
#include "mrpeval/experiments.hpp"
#include "mrpeval/io.hpp"

namespace mrpeval {

void validate(const ExperimentConfig& config) {
  require(!config.alphas.empty(), "experiment_config.empty_alphas", "alphas must be nonempty");
  require(!config.gammas.empty(), "experiment_config.empty_gammas", "gammas must be nonempty");
  require(config.n_samples >= 1, "experiment_config.n_samples", "n_samples must be >= 1");
  require(config.trials >= 1, "experiment_config.trials", "trials must be >= 1");
  require(config.mom_buckets >= 1 && config.mom_buckets <= config.n_samples, "experiment_config.mom_buckets",
          "mom_buckets must lie in [1, n_samples]");
  for (double g : config.gammas) {
    require(g >= 0.0 && g < 1.0, "experiment_config.gamma_out_of_range", "gammas must lie in [0, 1)");
  }
  for (double a : config.alphas) {
    require(a >= 0.0 && a <= 1.0, "experiment_config.alpha_out_of_range", "alphas must lie in [0, 1]");
  }
}

ExperimentConfig default_fig1_config() {
  ExperimentConfig c;
  c.alphas = {0.0, 0.5, 1.0};
  c.gammas = {0.9, 0.95, 0.98, 0.99, 0.995};
  c.output_path = "results/fig1";
  return c;
}

ExperimentConfig default_fig2_config() {
  ExperimentConfig c;
  c.alphas = {0.5, 0.75, 1.0};
  c.gammas = {0.9, 0.95, 0.98, 0.99};
  c.output_path = "results/fig2";
  return c;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  require(ec == std::errc() && ptr == t.data() + t.size() && !t.empty(), "experiment_config.bad_number",
          key + ": not a number: '" + t + "'");
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  require(ec == std::errc() && ptr == t.data() + t.size() && !t.empty(), "experiment_config.bad_integer",
          key + ": not a nonnegative integer: '" + t + "'");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  return out;
}

}  // namespace

namespace {

// Calls handle(key, value, line_no) for every non-blank, non-comment line.
template <typename Handler>
void for_each_entry(const std::string& text, Handler handle) {
  std::stringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, "config.syntax", "line " + std::to_string(line_no) + ": expected key = value");
    handle(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no);
  }
}

[[noreturn]] void unknown_key(const std::string& key, std::size_t line_no) {
  throw Error("config.unknown_key", "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, ExperimentConfig base) {
  for_each_entry(text, [&](const std::string& key, const std::string& value, std::size_t line_no) {
    if (key == "alphas") {
      base.alphas = parse_list(key, value);
    } else if (key == "gammas") {
      base.gammas = parse_list(key, value);
    } else if (key == "n_samples") {
      base.n_samples = parse_unsigned(key, value);
    } else if (key == "trials") {
      base.trials = parse_unsigned(key, value);
    } else if (key == "mom_buckets") {
      base.mom_buckets = parse_unsigned(key, value);
    } else if (key == "base_seed") {
      base.base_seed = parse_unsigned(key, value);
    } else if (key == "output_path") {
      base.output_path = value;
    } else if (key == "threads") {
      base.threads = parse_unsigned(key, value);
    } else {
      unknown_key(key, line_no);
    }
  });
  return base;
}

CertificateConfig parse_certificate_config(const std::string& text, CertificateConfig base) {
  for_each_entry(text, [&](const std::string& key, const std::string& value, std::size_t line_no) {
    if (key == "delta") {
      base.delta = parse_double(key, value);
    } else if (key == "c1") {
      base.c1 = parse_double(key, value);
    } else if (key == "c2") {
      base.c2 = parse_double(key, value);
    } else if (key == "c4") {
      base.c4 = parse_double(key, value);
    } else {
      unknown_key(key, line_no);
    }
  });
  validate(base);
  return base;
}

CertificateConfig load_certificate_config(const std::filesystem::path& path, CertificateConfig base) {
  return parse_certificate_config(read_text_file(path), base);
}

std::string certificate_config_text(const CertificateConfig& config) {
  // Shortest form that parses back to the same double.
  auto line = [](const char* key, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(key) + " = " + std::string(buf, res.ptr) + "\n";
  };
  return line("delta", config.delta) + line("c1", config.c1) + line("c2", config.c2) + line("c4", config.c4);
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path, ExperimentConfig base) {
  return parse_experiment_config(read_text_file(path), std::move(base));
}

}  // namespace mrpeval
