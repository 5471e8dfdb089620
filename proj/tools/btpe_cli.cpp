// btpe: predicted tables, the uniform-count experiment, limit analysis and
// sampler goodness-of-fit, all written as CSV.
//
// Exit codes: 0 success, 1 usage error, 2 cell failure.

#include <CLI11.hpp>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "btpe/harness.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kCellFailure = 2;

std::optional<std::uint64_t> parse_seed(const std::string& text) {
  int base = 10;
  std::string_view digits = text;
  if (digits.starts_with("0x") || digits.starts_with("0X")) {
    base = 16;
    digits.remove_prefix(2);
  }
  if (digits.empty()) return std::nullopt;
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
  if (ec != std::errc{} || end != digits.data() + digits.size()) return std::nullopt;
  return value;
}

bool is_power_of_two(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

struct Options {
  std::string seed = std::to_string(btpe::harness::kDefaultSeed);
  std::int64_t trials = 10000;
  std::optional<std::int64_t> gof_trials;
  double confidence = 0.95;
  std::optional<std::int64_t> n_min;
  std::optional<std::int64_t> n_max;
  std::vector<std::int64_t> n_list;
  btpe::harness::PMode p_mode = btpe::harness::PMode::both;
  std::string out;
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, Options& opt, bool sampling) {
  if (sampling) {
    cmd->add_option("--seed", opt.seed, "master seed, decimal or 0x-prefixed")
        ->envname("BTPE_SEED")
        ->capture_default_str();
    cmd->add_option("--jobs", opt.jobs, "worker threads")->envname("BTPE_JOBS")->check(CLI::PositiveNumber);
  }
  cmd->add_option("--out", opt.out, "output path (default: stdout)")->envname("BTPE_OUT");
}

void add_cells(CLI::App* cmd, Options& opt) {
  cmd->add_option("--n-min", opt.n_min, "smallest n (power of two)")->envname("BTPE_N_MIN");
  cmd->add_option("--n-max", opt.n_max, "largest n (power of two)")->envname("BTPE_N_MAX");
  cmd->add_option("--n", opt.n_list, "explicit list of n values")->envname("BTPE_N")->delimiter(',');
  const std::map<std::string, btpe::harness::PMode> modes{{"min-p", btpe::harness::PMode::min_p},
                                                          {"half", btpe::harness::PMode::half},
                                                          {"both", btpe::harness::PMode::both}};
  cmd->add_option("--p-mode", opt.p_mode, "which p per n: min-p (10/n), half, both")
      ->envname("BTPE_P_MODE")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
}

// Returns an empty list when the command's default should be used.
std::vector<std::int64_t> resolve_ns(const Options& opt) {
  if (!opt.n_list.empty()) return opt.n_list;
  if (!opt.n_min && !opt.n_max) return {};
  const std::int64_t lo = opt.n_min.value_or(32);
  const std::int64_t hi = opt.n_max.value_or(std::int64_t{1} << 20);
  if (!is_power_of_two(lo) || !is_power_of_two(hi) || lo > hi)
    throw CLI::ValidationError("--n-min/--n-max", "must be powers of two with n-min <= n-max");
  return btpe::harness::powers_of_two(std::countr_zero(static_cast<std::uint64_t>(lo)),
                                      std::countr_zero(static_cast<std::uint64_t>(hi)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BTPE binomial sampler: predictions, instrumented experiments, audits"};
  app.require_subcommand(1);
  Options opt;

  auto* predict = app.add_subcommand("predict", "expected uniforms per variate, p = 10/n and p = 1/2");
  add_common(predict, opt, false);
  add_cells(predict, opt);

  auto* validate = app.add_subcommand("validate", "count uniforms consumed by BTPE and t-test vs prediction");
  add_common(validate, opt, true);
  add_cells(validate, opt);
  validate->add_option("--trials", opt.trials, "variates per cell")
      ->envname("BTPE_TRIALS")
      ->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 40))
      ->capture_default_str();
  validate->add_option("--confidence", opt.confidence, "confidence level for intervals")
      ->envname("BTPE_CONFIDENCE")
      ->check(CLI::Range(0.0, 1.0).description("in (0, 1)"))
      ->capture_default_str();

  auto* limits = app.add_subcommand("limits", "large-n limits of the expected uniform count");
  add_common(limits, opt, false);

  auto* gof = app.add_subcommand("gof", "chi-square goodness of fit of sampled histograms");
  add_common(gof, opt, true);
  gof->add_option("--trials", opt.gof_trials, "variates per cell (default 100000)")
      ->envname("BTPE_TRIALS")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  std::uint64_t seed = 0;
  std::vector<std::int64_t> ns;
  try {
    const auto parsed = parse_seed(opt.seed);
    if (!parsed) throw CLI::ValidationError("--seed", "expected a decimal or 0x-prefixed 64-bit integer");
    seed = *parsed;
    ns = resolve_ns(opt);
    if (opt.confidence <= 0.0 || opt.confidence >= 1.0)
      throw CLI::ValidationError("--confidence", "must lie strictly between 0 and 1");
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return kUsageError;
  }

  std::ofstream file;
  if (!opt.out.empty()) {
    file.open(opt.out);
    if (!file) {
      std::cerr << "cannot open " << opt.out << '\n';
      return kUsageError;
    }
  }
  std::ostream& os = opt.out.empty() ? std::cout : file;

  try {
    namespace h = btpe::harness;
    if (*predict) {
      h::write_predict_csv(os, h::run_predict(ns.empty() ? h::default_predict_ns() : ns));
    } else if (*validate) {
      h::RunConfig config;
      config.seed = seed;
      config.trials = opt.trials;
      config.confidence = opt.confidence;
      config.n_list = ns;
      config.p_mode = opt.p_mode;
      config.jobs = opt.jobs;
      const auto rows = h::run_validate(config);
      h::write_validate_csv(os, rows);
      int passing = 0;
      bool even = true;
      for (const auto& r : rows) {
        passing += r.t_p_value > 0.05 ? 1 : 0;
        even = even && r.all_counts_even;
      }
      std::cerr << passing << '/' << rows.size() << " cells with t-test p > 0.05; "
                << (even ? "all" : "NOT all") << " per-variate counts even\n";
    } else if (*limits) {
      h::write_limits_csv(os);
    } else if (*gof) {
      h::write_gof_csv(os, h::run_gof(h::default_gof_cells(), opt.gof_trials.value_or(h::kDefaultGofTrials),
                                      seed, opt.jobs));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCellFailure;
  }
  return 0;
}
