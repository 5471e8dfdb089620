#pragma once

// Experiment drivers behind the command-line tool: predicted tables, the
// instrumented uniform-count experiment, limit reports and goodness of fit.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace btpe::harness {

inline constexpr std::uint64_t kDefaultSeed = 0x5EEDB7BE2023ULL;

enum class PMode { min_p, half, both };

/// Raised when a cell cannot be evaluated (e.g. BTPE does not apply).
class CellError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  std::int64_t trials = 10000;
  double confidence = 0.95;
  std::vector<std::int64_t> n_list;  // empty means the command's default
  PMode p_mode = PMode::both;
  unsigned jobs = 1;
};

/// 2^lo, 2^(lo+1), ..., 2^hi.
std::vector<std::int64_t> powers_of_two(int lo, int hi);

/// {20, 2^5, ..., 2^20}: the predicted-table rows.
std::vector<std::int64_t> default_predict_ns();
/// {2^5, ..., 2^20}: the experiment rows.
std::vector<std::int64_t> default_validate_ns();

/// Per-cell seed, a function of (master, n, p) only, so cells can run in any
/// order or in parallel.
std::uint64_t derive_cell_seed(std::uint64_t master, std::int64_t n, double p);

/// p = 10/n and/or p = 1/2 for each n, in (n, p) order, duplicates removed.
struct Cell {
  std::int64_t n;
  double p;
};
std::vector<Cell> make_cells(const std::vector<std::int64_t>& ns, PMode mode);

// ---- predict ---------------------------------------------------------------

struct PredictRow {
  std::int64_t n;
  double ev_min_p;
  double ev_half;
};

/// Throws CellError when a row is outside BTPE's range (n < 20).
std::vector<PredictRow> run_predict(const std::vector<std::int64_t>& ns);
void write_predict_csv(std::ostream& os, const std::vector<PredictRow>& rows);

// ---- validate --------------------------------------------------------------

struct ExperimentRow {
  std::int64_t n = 0;
  double p = 0.0;
  double predicted_ev = 0.0;
  double empirical_mean = 0.0;
  double ci_half_width = 0.0;
  double t_p_value = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  // Not part of the CSV.
  bool all_counts_even = true;
  std::uint64_t max_uniforms = 0;
};

/// Draws `trials` BTPE variates through a counting source and compares the
/// uniforms-per-variate mean with the predicted E[V].
ExperimentRow run_validation_cell(const Cell& cell, const RunConfig& config);
std::vector<ExperimentRow> run_validate(const RunConfig& config);
void write_validate_csv(std::ostream& os, const std::vector<ExperimentRow>& rows);

// ---- limits ----------------------------------------------------------------

void write_limits_csv(std::ostream& os);

// ---- goodness of fit -------------------------------------------------------

struct GofRow {
  std::int64_t n;
  double p;
  double chi2_p_value;
  bool pass;  // p-value > 0.01
  std::uint64_t seed;
};

inline constexpr std::int64_t kDefaultGofTrials = 100000;

/// (20, .5), (50, .3), (19, .5), (1000, .01), (100, .7), (10, 0).
std::vector<Cell> default_gof_cells();
GofRow run_gof_cell(const Cell& cell, std::int64_t trials, std::uint64_t master_seed);
std::vector<GofRow> run_gof(const std::vector<Cell>& cells, std::int64_t trials,
                            std::uint64_t master_seed, unsigned jobs = 1);
void write_gof_csv(std::ostream& os, const std::vector<GofRow>& rows);

}  // namespace btpe::harness
