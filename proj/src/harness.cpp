#include "btpe/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <exception>
#include <optional>
#include <ostream>
#include <thread>

#include "btpe/analysis.hpp"
#include "btpe/binomial.hpp"
#include "btpe/stats.hpp"
#include "btpe/uniform_source.hpp"

namespace btpe::harness {
namespace {

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string fixed3(double v) { return fmt("%.3f", v); }
std::string sig6(double v) { return fmt("%.6g", v); }

// Evaluates fn(i) for i in [0, count) on up to `jobs` threads. Results come
// back in index order; the lowest-index exception is rethrown.
template <class T, class Fn>
std::vector<T> run_indexed(std::size_t count, unsigned jobs, Fn fn) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::clamp<unsigned>(jobs, 1U, static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  std::vector<T> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace

std::vector<std::int64_t> powers_of_two(int lo, int hi) {
  if (lo < 0 || hi > 62 || lo > hi) throw std::invalid_argument("powers_of_two: bad exponent range");
  std::vector<std::int64_t> out;
  for (int e = lo; e <= hi; ++e) out.push_back(std::int64_t{1} << e);
  return out;
}

std::vector<std::int64_t> default_predict_ns() {
  auto ns = powers_of_two(5, 20);
  ns.insert(ns.begin(), 20);
  return ns;
}

std::vector<std::int64_t> default_validate_ns() { return powers_of_two(5, 20); }

std::uint64_t derive_cell_seed(std::uint64_t master, std::int64_t n, double p) {
  return splitmix64_mix(master ^ splitmix64_mix(static_cast<std::uint64_t>(n)) ^
                        splitmix64_mix(std::bit_cast<std::uint64_t>(p)));
}

std::vector<Cell> make_cells(const std::vector<std::int64_t>& ns, PMode mode) {
  std::vector<Cell> cells;
  for (const auto n : ns) {
    if (n <= 0) throw CellError("cell n must be positive, got " + std::to_string(n));
    if (mode != PMode::half) cells.push_back({n, 10.0 / static_cast<double>(n)});
    if (mode != PMode::min_p) cells.push_back({n, 0.5});
  }
  std::sort(cells.begin(), cells.end(),
            [](const Cell& a, const Cell& b) { return a.n != b.n ? a.n < b.n : a.p < b.p; });
  cells.erase(std::unique(cells.begin(), cells.end(),
                          [](const Cell& a, const Cell& b) { return a.n == b.n && a.p == b.p; }),
              cells.end());
  return cells;
}

std::vector<PredictRow> run_predict(const std::vector<std::int64_t>& ns) {
  std::vector<PredictRow> rows;
  for (const auto n : ns) {
    const BinomialParams min_p{n, 10.0 / static_cast<double>(n)};
    const BinomialParams half{n, 0.5};
    if (n < 20 || !btpe_applicable(min_p) || !btpe_applicable(half))
      throw CellError("predict: BTPE does not apply at n = " + std::to_string(n));
    rows.push_back({n, analysis::predict_uniforms(min_p).e_uniforms,
                    analysis::predict_uniforms(half).e_uniforms});
  }
  return rows;
}

void write_predict_csv(std::ostream& os, const std::vector<PredictRow>& rows) {
  os << "n,ev_min_p,ev_half\n";
  for (const auto& r : rows) os << r.n << ',' << fixed3(r.ev_min_p) << ',' << fixed3(r.ev_half) << '\n';
}

ExperimentRow run_validation_cell(const Cell& cell, const RunConfig& config) {
  const BinomialParams params{cell.n, cell.p};
  if (!btpe_applicable(params))
    throw CellError("validate: BTPE does not apply at n = " + std::to_string(cell.n) +
                    ", p = " + sig6(cell.p));
  if (config.trials < 2) throw CellError("validate: trials must be at least 2");

  ExperimentRow row;
  row.n = cell.n;
  row.p = cell.p;
  row.trials = config.trials;
  row.seed = derive_cell_seed(config.seed, cell.n, cell.p);
  row.predicted_ev = analysis::predict_uniforms(params).e_uniforms;

  const BtpeConstants constants = compute_btpe_constants(params);
  CountingSource source{BlockSplitMix64{row.seed}};
  std::vector<double> counts;
  counts.reserve(static_cast<std::size_t>(config.trials));
  for (std::int64_t i = 0; i < config.trials; ++i) {
    source.reset();
    sample_btpe(params, constants, source);
    const std::uint64_t used = source.draws();
    row.all_counts_even = row.all_counts_even && used % 2 == 0 && used >= 2;
    row.max_uniforms = std::max(row.max_uniforms, used);
    counts.push_back(static_cast<double>(used));
  }

  const auto summary = stats::summarize(counts, config.confidence);
  row.empirical_mean = summary.mean;
  row.ci_half_width = summary.ci_half_width;
  row.t_p_value = stats::t_test_one_sample(counts, row.predicted_ev);
  return row;
}

std::vector<ExperimentRow> run_validate(const RunConfig& config) {
  const auto cells = make_cells(config.n_list.empty() ? default_validate_ns() : config.n_list,
                                config.p_mode);
  return run_indexed<ExperimentRow>(cells.size(), config.jobs,
                                    [&](std::size_t i) { return run_validation_cell(cells[i], config); });
}

void write_validate_csv(std::ostream& os, const std::vector<ExperimentRow>& rows) {
  os << "n,p,predicted_ev,mean,ci_half_width,t_p_value,trials,seed\n";
  for (const auto& r : rows) {
    os << r.n << ',' << sig6(r.p) << ',' << fixed3(r.predicted_ev) << ',' << fixed3(r.empirical_mean)
       << ',' << sig6(r.ci_half_width) << ',' << sig6(r.t_p_value) << ',' << r.trials << ','
       << r.seed << '\n';
  }
}

void write_limits_csv(std::ostream& os) {
  const auto min_p = analysis::limit_min_p();
  const auto half = analysis::limit_half();
  constexpr std::int64_t kLargeN = std::int64_t{1} << 20;
  const double ev_min_p =
      analysis::predict_uniforms({kLargeN, 10.0 / static_cast<double>(kLargeN)}).e_uniforms;
  const double ev_half = analysis::predict_uniforms({kLargeN, 0.5}).e_uniforms;

  const auto line = [&](const char* name, double v) { os << name << ',' << fmt("%.6f", v) << '\n'; };
  os << "quantity,value\n";
  line("min_p.p1_limit", min_p.p1_limit);
  line("min_p.lambda_l_limit", min_p.lambda_l_limit);
  line("min_p.lambda_r_limit", min_p.lambda_r_limit);
  line("min_p.c", min_p.c);
  line("min_p.prefactor", min_p.prefactor);
  line("min_p.limit", min_p.result);
  line("min_p.predicted_n_2^20", ev_min_p);
  line("min_p.delta", std::abs(ev_min_p - min_p.result));
  line("half.p1_over_sqrt_n", half.p1_over_sqrt_n);
  line("half.c_limit", half.c_limit);
  line("half.two_over_sqrtn_lambda_r", half.two_over_sqrtn_lambda_r);
  line("half.prefactor", half.prefactor);
  line("half.limit", half.result);
  line("half.predicted_n_2^20", ev_half);
  line("half.delta", std::abs(ev_half - half.result));
}

std::vector<Cell> default_gof_cells() {
  return {{20, 0.5}, {50, 0.3}, {19, 0.5}, {1000, 0.01}, {100, 0.7}, {10, 0.0}};
}

GofRow run_gof_cell(const Cell& cell, std::int64_t trials, std::uint64_t master_seed) {
  if (trials < 1) throw CellError("gof: trials must be positive");
  const BinomialParams params{cell.n, cell.p};
  const BinomialDistribution dist(params);
  GofRow row{cell.n, cell.p, 0.0, false, derive_cell_seed(master_seed, cell.n, cell.p)};

  BlockSplitMix64 source{row.seed};
  std::vector<std::int64_t> histogram(static_cast<std::size_t>(cell.n) + 1, 0);
  for (std::int64_t i = 0; i < trials; ++i) ++histogram[static_cast<std::size_t>(dist(source))];

  row.chi2_p_value = stats::chi_square_gof(histogram, pmf_table(params), trials);
  row.pass = row.chi2_p_value > 0.01;
  return row;
}

std::vector<GofRow> run_gof(const std::vector<Cell>& cells, std::int64_t trials,
                            std::uint64_t master_seed, unsigned jobs) {
  return run_indexed<GofRow>(cells.size(), jobs, [&](std::size_t i) {
    return run_gof_cell(cells[i], trials, master_seed);
  });
}

void write_gof_csv(std::ostream& os, const std::vector<GofRow>& rows) {
  os << "n,p,chi2_p_value,pass\n";
  for (const auto& r : rows)
    os << r.n << ',' << sig6(r.p) << ',' << sig6(r.chi2_p_value) << ',' << (r.pass ? "true" : "false")
       << '\n';
}

}  // namespace btpe::harness
