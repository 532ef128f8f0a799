#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "blocksplit/core.hpp"
#include "blocksplit/strategies.hpp"

namespace blocksplit {

/// Header of every simulation CSV, kept identical to the figure data files.
inline constexpr std::string_view simulate_csv_header =
    "hammer_h,mean_fullness,min_fullness,max_fullness";
inline constexpr std::string_view analyze_csv_header =
    "r,predicted_fullness,table_bound,deferred_closed_form";

struct SweepSpec {
    StrategyKind strategy = StrategyKind::even;
    int block_size = 240;
    std::vector<int> r_values;
    std::int64_t total_insertions = 200000;
    int runs = 10;
    std::uint64_t base_seed = 1;
    SeedingMode seeding = SeedingMode::empty_with_dummy;
    Uneven2Mode uneven2_mode = Uneven2Mode::exact;
    /// Worker threads across sweep points; 0 picks the hardware count.
    int threads = 0;
};

/// "lo:hi:step" (step optional, default 1) to the list lo, lo+step, ..., <= hi.
std::vector<int> parse_range(std::string_view text);

/// Ten significant digits, the fixed float format of every CSV.
std::string format_number(double value);

/// Monte Carlo summaries for every r in the spec, in r order.
std::vector<FullnessSummary> run_sweep(const SweepSpec& spec);

std::string simulate_csv(const std::vector<FullnessSummary>& rows);

/// Runs the sweep and writes its CSV to `out_path` ("-" or empty: return only).
std::string cmd_simulate(const SweepSpec& spec, const std::string& out_path);

/// One row per r; cells are empty where a formula does not apply.
std::string cmd_analyze(int block_size, const std::vector<int>& r_values,
                        const std::string& out_path);

struct CsvRow {
    double hammer_h = 0.0;
    double mean_fullness = 0.0;
    double min_fullness = 0.0;
    double max_fullness = 0.0;
};

/// Parses a simulation CSV. Throws ParseError naming the line for malformed
/// content, including a file with no data rows.
std::vector<CsvRow> parse_simulate_csv(std::string_view text);

enum class Overlay { none, lemma61, table1 };
Overlay parse_overlay(std::string_view name);

struct PlotSeries {
    std::string label;
    std::vector<CsvRow> rows;
};

/// Self-contained SVG: x = r/B, y = fullness on [0.5, 1], min-max band and
/// mean line per series, optional theoretical overlay in red.
std::string render_svg(const std::vector<PlotSeries>& series, int block_size, Overlay overlay);

/// Reads the CSVs, renders them and writes the SVG. Nothing is written if
/// any input fails to parse.
std::string cmd_plot(const std::vector<std::string>& csv_paths, int block_size, Overlay overlay,
                     const std::string& out_path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace blocksplit
