#include "mrpeval/sampling.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mrpeval/error.hpp"
#include "mrpeval/io.hpp"
#include "mrpeval/rng.hpp"

namespace mrpeval {

SampleBatch::SampleBatch(std::size_t dim, std::size_t n, double source_gamma, std::vector<std::uint32_t> next_states,
                         std::vector<double> rewards, std::uint64_t base_seed)
    : dim_(dim),
      n_(n),
      source_gamma_(source_gamma),
      next_states_(std::move(next_states)),
      rewards_(std::move(rewards)),
      base_seed_(base_seed) {
  require(n_ >= 1, "batch.empty", "a sample batch needs at least one round");
  require(dim_ >= 1, "batch.empty", "a sample batch needs at least one state");
  require(next_states_.size() == n_ * dim_ && rewards_.size() == n_ * dim_, "batch.shape_mismatch",
          "sample arrays do not have n * dim entries");
  for (std::uint32_t x : next_states_) {
    require(x < dim_, "batch.state_out_of_range", "next-state index " + std::to_string(x) + " >= dim");
  }
}

SampleBatch SampleBatch::prefix(std::size_t m) const {
  require(m >= 1 && m <= n_, "batch.bad_prefix", "prefix length must be in [1, n]");
  return SampleBatch(dim_, m, source_gamma_,
                     std::vector<std::uint32_t>(next_states_.begin(), next_states_.begin() + m * dim_),
                     std::vector<double>(rewards_.begin(), rewards_.begin() + m * dim_), base_seed_);
}

Matrix cumulative_rows(const Matrix& p) {
  Matrix cum(p.rows(), p.cols());
  for (std::size_t j = 0; j < p.rows(); ++j) {
    double acc = 0.0;
    for (std::size_t x = 0; x < p.cols(); ++x) {
      acc += p(j, x);
      cum(j, x) = acc;
    }
  }
  return cum;
}

SampleBatch sample_batch(const Mrp& mrp, std::size_t n, RngSpec rng) {
  require(n >= 1, "sample.zero_rounds", "number of rounds must be >= 1");
  const std::size_t dim = mrp.dim();
  const Matrix cum = cumulative_rows(mrp.transition());
  const auto& r = mrp.reward();
  const auto& noise = mrp.reward_noise();

  // Purpose-level prefixes of derive_cell_seed, hoisted out of the loops.
  const std::uint64_t base_hash = splitmix64(rng.base_seed);
  const std::uint64_t state_prefix = splitmix64(base_hash ^ static_cast<std::uint64_t>(StreamPurpose::next_state));
  const std::uint64_t reward_prefix = splitmix64(base_hash ^ static_cast<std::uint64_t>(StreamPurpose::reward));

  std::vector<std::uint32_t> next(n * dim);
  std::vector<double> rewards(n * dim);
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t state_round = splitmix64(state_prefix ^ k);
    const std::uint64_t reward_round = splitmix64(reward_prefix ^ k);
    for (std::size_t j = 0; j < dim; ++j) {
      Xoshiro256StarStar draw(splitmix64(state_round ^ j));
      next[k * dim + j] = categorical(cum.row(j), draw.uniform());
      if (noise[j] > 0.0) {
        Xoshiro256StarStar reward_draw(splitmix64(reward_round ^ j));
        rewards[k * dim + j] = r[j] + noise[j] * standard_normal(reward_draw);
      } else {
        rewards[k * dim + j] = r[j];
      }
    }
  }
  return SampleBatch(dim, n, mrp.gamma(), std::move(next), std::move(rewards), rng.base_seed);
}

EmpiricalModel empirical_model(const SampleBatch& batch) {
  const std::size_t dim = batch.dim();
  const std::size_t n = batch.n();
  std::vector<std::size_t> counts(dim * dim, 0);
  Vector reward_sum(dim, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < dim; ++j) {
      ++counts[j * dim + batch.next_state(k, j)];
      reward_sum[j] += batch.reward(k, j);
    }
  }
  EmpiricalModel model{Matrix(dim, dim), Vector(dim)};
  const double rounds = static_cast<double>(n);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t x = 0; x < dim; ++x) model.p_hat(j, x) = static_cast<double>(counts[j * dim + x]) / rounds;
    model.r_hat[j] = reward_sum[j] / rounds;
  }
  return model;
}

Vector empirical_reward_mean(const SampleBatch& batch) {
  Vector sum(batch.dim(), 0.0);
  for (std::size_t k = 0; k < batch.n(); ++k) {
    for (std::size_t j = 0; j < batch.dim(); ++j) sum[j] += batch.reward(k, j);
  }
  for (double& v : sum) v /= static_cast<double>(batch.n());
  return sum;
}

void write_batch_csv(const std::filesystem::path& csv_path, const SampleBatch& batch) {
  std::string out = "round,state,next_state,reward\n";
  out.reserve(out.size() + batch.n() * batch.dim() * 32);
  char line[96];
  for (std::size_t k = 0; k < batch.n(); ++k) {
    for (std::size_t j = 0; j < batch.dim(); ++j) {
      std::snprintf(line, sizeof line, "%zu,%zu,%" PRIu32 ",%.17g\n", k, j, batch.next_state(k, j),
                    batch.reward(k, j));
      out += line;
    }
  }
  write_text_file(csv_path, out);
  const nlohmann::json sidecar = {
      {"n", batch.n()}, {"dim", batch.dim()}, {"base_seed", batch.base_seed()}, {"gamma", batch.source_gamma()}};
  write_text_file(csv_path.string() + ".json", sidecar.dump(2) + "\n");
}

SampleBatch read_batch_csv(const std::filesystem::path& csv_path) {
  nlohmann::json sidecar;
  try {
    sidecar = nlohmann::json::parse(read_text_file(csv_path.string() + ".json"));
  } catch (const nlohmann::json::exception& e) {
    throw Error("batch.bad_sidecar", csv_path.string() + ".json: " + e.what());
  }
  std::size_t n = 0, dim = 0;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  try {
    n = sidecar.at("n").get<std::size_t>();
    dim = sidecar.at("dim").get<std::size_t>();
    gamma = sidecar.at("gamma").get<double>();
    seed = sidecar.value("base_seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw Error("batch.bad_sidecar", csv_path.string() + ".json: " + e.what());
  }
  require(n >= 1 && dim >= 1, "batch.bad_sidecar", "sidecar n and dim must be >= 1");

  std::vector<std::uint32_t> next(n * dim, 0);
  std::vector<double> rewards(n * dim, 0.0);
  std::vector<char> seen(n * dim, 0);

  std::istringstream in(read_text_file(csv_path));
  std::string line;
  std::getline(in, line);
  require(line.rfind("round,state,next_state,reward", 0) == 0, "batch.bad_header", "unexpected CSV header");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    unsigned long long k = 0, j = 0, x = 0;
    double rew = 0.0;
    require(std::sscanf(line.c_str(), "%llu,%llu,%llu,%lf", &k, &j, &x, &rew) == 4, "batch.bad_row",
            "cannot parse CSV line " + std::to_string(line_no));
    require(k < n && j < dim && x < dim, "batch.bad_row", "index out of range on CSV line " + std::to_string(line_no));
    next[k * dim + j] = static_cast<std::uint32_t>(x);
    rewards[k * dim + j] = rew;
    seen[k * dim + j] = 1;
  }
  for (char s : seen) require(s != 0, "batch.incomplete", "CSV does not cover every (round, state) cell");
  return SampleBatch(dim, n, gamma, std::move(next), std::move(rewards), seed);
}

}  // namespace mrpeval
