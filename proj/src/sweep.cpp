#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "blocksplit/bounds.hpp"
#include "blocksplit/cli.hpp"
#include "blocksplit/errors.hpp"
#include "blocksplit/simulate.hpp"
#include "blocksplit/spectral.hpp"

namespace blocksplit {

namespace {

int parse_int(std::string_view text, std::string_view what) {
    const std::string s(text);
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno != 0 || v < INT32_MIN || v > INT32_MAX) {
        throw ParameterError("bad " + std::string(what) + " '" + s + "'");
    }
    return static_cast<int>(v);
}

bool parse_double(std::string_view text, double& out) {
    const std::string s(text);
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && errno == 0 && std::isfinite(out);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto at = text.find(sep, start);
        parts.push_back(text.substr(start, at == std::string_view::npos ? at : at - start));
        if (at == std::string_view::npos) break;
        start = at + 1;
    }
    return parts;
}

std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::vector<int> parse_range(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() < 2 || parts.size() > 3) {
        throw ParameterError("batch range must look like lo:hi or lo:hi:step, got '" +
                             std::string(text) + "'");
    }
    const int lo = parse_int(parts[0], "range start");
    const int hi = parse_int(parts[1], "range end");
    const int step = parts.size() == 3 ? parse_int(parts[2], "range step") : 1;
    if (step < 1) throw ParameterError("range step must be positive");
    if (lo < 1 || hi < lo) throw ParameterError("range needs 1 <= lo <= hi");
    std::vector<int> out;
    for (long r = lo; r <= hi; r += step) out.push_back(static_cast<int>(r));
    return out;
}

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

std::vector<FullnessSummary> run_sweep(const SweepSpec& spec) {
    if (spec.r_values.empty()) throw ParameterError("sweep needs at least one batch size");
    std::vector<RunConfig> configs;
    for (int r : spec.r_values) {
        RunConfig cfg;
        cfg.strategy = spec.strategy;
        cfg.params = SplitParams(spec.block_size, r);
        cfg.total_insertions = spec.total_insertions;
        cfg.runs = spec.runs;
        cfg.base_seed = spec.base_seed;
        cfg.seeding = spec.seeding;
        cfg.uneven2_mode = spec.uneven2_mode;
        validate_config(cfg);
        configs.push_back(cfg);
    }

    std::vector<FullnessSummary> out(configs.size());
    unsigned workers = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                        : std::max(1U, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(configs.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    const auto work = [&] {
        for (std::size_t i = next++; i < configs.size() && !failed; i = next++) {
            try {
                out[i] = run_monte_carlo(configs[i]);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::string simulate_csv(const std::vector<FullnessSummary>& rows) {
    std::string csv(simulate_csv_header);
    csv += '\n';
    for (const auto& s : rows) {
        csv += std::to_string(s.batch_size) + ',' + format_number(s.mean_fullness) + ',' +
               format_number(s.min_fullness) + ',' + format_number(s.max_fullness) + '\n';
    }
    return csv;
}

std::string cmd_simulate(const SweepSpec& spec, const std::string& out_path) {
    const std::string csv = simulate_csv(run_sweep(spec));
    if (!out_path.empty() && out_path != "-") write_text_file(out_path, csv);
    return csv;
}

std::string cmd_analyze(int block_size, const std::vector<int>& r_values,
                        const std::string& out_path) {
    if (r_values.empty()) throw ParameterError("analyze needs at least one batch size");
    std::string csv(analyze_csv_header);
    csv += '\n';
    for (int r : r_values) {
        const SplitParams params(block_size, r);
        std::string predicted;
        if (block_size % 2 == 1 && 2 * r < block_size) {
            predicted = format_number(solve_spectral(params).predicted_fullness);
        }
        std::string deferred;
        try {
            deferred = format_number(deferred_closed_form(block_size, r).fill);
        } catch (const OutOfRangeError&) {
        }
        csv += std::to_string(r) + ',' + predicted + ',' +
               format_number(table_bound(block_size, r).fill) + ',' + deferred + '\n';
    }
    if (!out_path.empty() && out_path != "-") write_text_file(out_path, csv);
    return csv;
}

std::vector<CsvRow> parse_simulate_csv(std::string_view text) {
    auto lines = split(text, '\n');
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw ParseError("empty CSV", 1);
    const auto strip = [](std::string_view l) {
        return (!l.empty() && l.back() == '\r') ? l.substr(0, l.size() - 1) : l;
    };
    if (strip(lines[0]) != simulate_csv_header) {
        throw ParseError("expected header '" + std::string(simulate_csv_header) + "'", 1);
    }
    if (lines.size() == 1) throw ParseError("CSV has no data rows", 2);
    std::vector<CsvRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split(strip(lines[i]), ',');
        if (fields.size() != 4) {
            throw ParseError("expected 4 fields, found " + std::to_string(fields.size()), i + 1);
        }
        CsvRow row;
        double* slots[] = {&row.hammer_h, &row.mean_fullness, &row.min_fullness, &row.max_fullness};
        for (std::size_t f = 0; f < 4; ++f) {
            if (!parse_double(fields[f], *slots[f])) {
                throw ParseError("field " + std::to_string(f + 1) + " is not a number: '" +
                                 std::string(fields[f]) + "'", i + 1);
            }
        }
        rows.push_back(row);
    }
    return rows;
}

Overlay parse_overlay(std::string_view name) {
    if (name == "none") return Overlay::none;
    if (name == "lemma61") return Overlay::lemma61;
    if (name == "table1") return Overlay::table1;
    throw ParameterError("unknown overlay '" + std::string(name) + "'");
}

std::string render_svg(const std::vector<PlotSeries>& series, int block_size, Overlay overlay) {
    if (block_size < 1) throw ParameterError("plot needs a positive block size");
    if (series.empty()) throw ParameterError("nothing to plot");
    constexpr double width = 820, height = 480;
    constexpr double left = 64, right = 24, top = 28, bottom = 56;
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    constexpr double ymin = 0.5, ymax = 1.0;

    double amin = INFINITY, amax = -INFINITY;
    for (const auto& s : series) {
        for (const auto& row : s.rows) {
            amin = std::min(amin, row.hammer_h / block_size);
            amax = std::max(amax, row.hammer_h / block_size);
        }
    }
    double xmin = std::floor(amin * 10.0) / 10.0;
    double xmax = std::ceil(amax * 10.0) / 10.0;
    if (xmax <= xmin) xmax = xmin + 0.1;
    const auto px = [&](double a) { return left + (a - xmin) / (xmax - xmin) * pw; };
    const auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<defs><clipPath id=\"plot\"><rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw
        << "\" height=\"" << ph << "\"/></clipPath></defs>\n";

    // Grid and axes.
    for (int t = 0; t <= 5; ++t) {
        const double y = ymin + 0.1 * t;
        svg << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << svg_num(py(y))
            << "\" y2=\"" << svg_num(py(y)) << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << svg_num(py(y) + 4)
            << "\" text-anchor=\"end\">" << format_number(std::round(y * 10) / 10) << "</text>\n";
    }
    const int xticks = 10;
    for (int t = 0; t <= xticks; ++t) {
        const double a = xmin + (xmax - xmin) * t / xticks;
        svg << "<line x1=\"" << svg_num(px(a)) << "\" x2=\"" << svg_num(px(a)) << "\" y1=\"" << top
            << "\" y2=\"" << top + ph << "\" stroke=\"#eee\"/>\n";
        svg << "<text x=\"" << svg_num(px(a)) << "\" y=\"" << top + ph + 18
            << "\" text-anchor=\"middle\">" << format_number(std::round(a * 1000) / 1000) << "</text>\n";
    }
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 14
        << "\" text-anchor=\"middle\">alpha = r/B (B=" << block_size << ")</text>\n";
    svg << "<text transform=\"translate(16," << top + ph / 2
        << ") rotate(-90)\" text-anchor=\"middle\">fullness</text>\n";

    static const char* palette[] = {"#1f4e9e", "#2a9d55", "#8e44ad", "#d35400", "#555555"};
    svg << "<g clip-path=\"url(#plot)\">\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = palette[k % 5];
        auto rows = series[k].rows;
        std::sort(rows.begin(), rows.end(),
                  [](const CsvRow& a, const CsvRow& b) { return a.hammer_h < b.hammer_h; });
        svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.25\" stroke=\"none\" points=\"";
        for (const auto& row : rows) {
            svg << svg_num(px(row.hammer_h / block_size)) << ',' << svg_num(py(row.max_fullness)) << ' ';
        }
        for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
            svg << svg_num(px(it->hammer_h / block_size)) << ',' << svg_num(py(it->min_fullness)) << ' ';
        }
        svg << "\"/>\n";
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& row : rows) {
            svg << svg_num(px(row.hammer_h / block_size)) << ',' << svg_num(py(row.mean_fullness)) << ' ';
        }
        svg << "\"/>\n";
    }

    if (overlay == Overlay::lemma61) {
        for (int i = 1; i <= 40; ++i) {
            const double a0 = 1.0 / (2.0 * i);
            const double a1 = 1.0 / (2.0 * i - 1.0);
            if (a1 < xmin || a0 > xmax) continue;
            const double h = harmonic(2 * i) - harmonic(i);
            svg << "<line stroke=\"#e06666\" stroke-width=\"3\" x1=\"" << svg_num(px(a0)) << "\" y1=\""
                << svg_num(py(2.0 * i * a0 * h)) << "\" x2=\"" << svg_num(px(a1)) << "\" y2=\""
                << svg_num(py(2.0 * i * a1 * h)) << "\"/>\n";
        }
    } else if (overlay == Overlay::table1) {
        const int r0 = std::max(1, static_cast<int>(std::floor(xmin * block_size)));
        const int r1 = std::max(r0, static_cast<int>(std::ceil(xmax * block_size)));
        svg << "<polyline fill=\"none\" stroke=\"#e06666\" stroke-width=\"2\" points=\"";
        for (int r = r0; r <= r1; ++r) {
            svg << svg_num(px(static_cast<double>(r) / block_size)) << ','
                << svg_num(py(table_bound(block_size, r).fill)) << ' ';
        }
        svg << "\"/>\n";
    }
    svg << "</g>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const double y = top + 16 + 16.0 * static_cast<double>(k);
        svg << "<line x1=\"" << left + 10 << "\" x2=\"" << left + 34 << "\" y1=\"" << y << "\" y2=\"" << y
            << "\" stroke=\"" << palette[k % 5] << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << left + 40 << "\" y=\"" << y + 4 << "\">" << xml_escape(series[k].label)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string cmd_plot(const std::vector<std::string>& csv_paths, int block_size, Overlay overlay,
                     const std::string& out_path) {
    if (csv_paths.empty()) throw ParameterError("plot needs at least one CSV");
    std::vector<PlotSeries> series;
    for (const auto& path : csv_paths) {
        const std::string text = read_text_file(path);
        try {
            series.push_back({path, parse_simulate_csv(text)});
        } catch (const ParseError& e) {
            throw ParseError(path + ": " + std::string(e.what()).substr(0, std::string(e.what()).rfind(" (line")),
                             e.line());
        }
    }
    const std::string svg = render_svg(series, block_size, overlay);
    if (!out_path.empty() && out_path != "-") write_text_file(out_path, svg);
    return svg;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace blocksplit
