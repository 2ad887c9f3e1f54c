#include "arrkit/indicator/arr.hpp"

#include <algorithm>
#include <string>

#include "arrkit/core/error.hpp"
#include "arrkit/core/text.hpp"
#include "arrkit/stats/metrics.hpp"

namespace arrkit::indicator {

using metrics::Frequency;

std::string_view source_name(Source s) { return s == Source::autoencoder ? "autoencoder" : "pca"; }

Source parse_source(std::string_view name) {
    if (name == "autoencoder" || name == "ae") return Source::autoencoder;
    if (name == "pca") return Source::pca;
    throw DataError("unknown ARR source '" + std::string(name) + "'");
}

std::vector<double> block_sums(const Matrix& values, const metrics::ReturnsPanel& base) {
    if (values.rows() != base.rows()) throw Error("block_sums: panel rows do not match the returns grid");
    const auto grid = metrics::window_grid(base, Frequency::min5);
    std::vector<double> out(grid.size());
    for (std::size_t w = 0; w < grid.size(); ++w) {
        const auto [b, e] = grid.rows[w];
        double acc = 0.0;
        for (std::size_t t = b; t < e; ++t)
            for (double v : values.row(t)) acc += v;
        out[w] = acc;
    }
    return out;
}

ArrSeries compute_arr(const Reconstruction& rec, const metrics::ReturnsPanel& base, Frequency interval, Source source,
                      metrics::WeekMode week_mode) {
    if (interval == Frequency::second) throw Error("compute_arr: misaligned interval '1s'");
    if (rec.squared_error.rows() != rec.squared_return.rows() || rec.squared_error.cols() != rec.squared_return.cols())
        throw Error("compute_arr: error and square panels differ in shape");
    const auto grid = metrics::window_grid(base, interval, week_mode);
    const auto num = metrics::aggregate_blocks(grid, block_sums(rec.squared_error, base));
    const auto den = metrics::aggregate_blocks(grid, block_sums(rec.squared_return, base));
    ArrSeries out;
    out.interval = interval;
    out.source = source;
    for (std::size_t w = 0; w < grid.size(); ++w) {
        if (!(den[w] > 0.0)) continue;
        out.timestamps.push_back(grid.stamps[w]);
        out.numerators.push_back(num[w]);
        out.denominators.push_back(den[w]);
        out.values.push_back(num[w] / den[w]);
    }
    if (out.size() == 0) throw Error("empty window set");
    return out;
}

double steps_per_day(Frequency f, metrics::WeekMode week_mode) {
    switch (f) {
        case Frequency::second: return static_cast<double>(market::kSessionSeconds);
        case Frequency::min5: return static_cast<double>(market::kSessionSeconds / 300);
        case Frequency::hour1: return static_cast<double>(market::kSessionSeconds / 3600);
        case Frequency::day1: return 1.0;
        case Frequency::week1:
            return week_mode == metrics::WeekMode::rolling ? 1.0 : 1.0 / static_cast<double>(metrics::kSessionsPerWeek);
    }
    return 1.0;
}

ArrSeries smooth_arr(const ArrSeries& series, double half_life) {
    if (series.size() == 0) throw Error("smooth_arr: empty series");
    ArrSeries out = series;
    out.values = metrics::ewm_mean(series.values, half_life);
    out.smoothed = true;
    return out;
}

Alignment arr_risk_alignment(const ArrSeries& arr, const metrics::RiskSeries& risk) {
    if (arr.interval != risk.interval) throw Error("arr_risk_alignment: series have different intervals");
    Alignment out;
    std::size_t i = 0, j = 0;
    while (i < arr.size() && j < risk.size()) {
        if (arr.timestamps[i] < risk.timestamps[j]) {
            ++i;
        } else if (risk.timestamps[j] < arr.timestamps[i]) {
            ++j;
        } else {
            out.timestamps.push_back(arr.timestamps[i]);
            out.arr.push_back(arr.values[i]);
            out.risk.push_back(risk.values[j]);
            ++i;
            ++j;
        }
    }
    if (out.timestamps.empty()) throw Error("arr_risk_alignment: empty intersection");
    out.arr = metrics::winsorize(out.arr);
    out.risk = metrics::winsorize(out.risk);
    out.spearman = stats::spearman(out.arr, out.risk);
    return out;
}

metrics::RiskSeries as_risk_series(const ArrSeries& arr) {
    metrics::RiskSeries r;
    r.timestamps = arr.timestamps;
    r.values = arr.values;
    r.kind = metrics::SeriesKind::arr;
    r.interval = arr.interval;
    return r;
}

void write_arr_csv(const ArrSeries& series, const std::filesystem::path& path) {
    std::string out = "timestamp,arr\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += std::to_string(series.timestamps[i]);
        out += ',';
        out += format_double(series.values[i]);
        out += '\n';
    }
    write_file(path, out);
}

ArrSeries read_arr_csv(const std::filesystem::path& path, Frequency interval, Source source) {
    ArrSeries out;
    out.interval = interval;
    out.source = source;
    const std::string text = read_file(path);
    const auto lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != "timestamp,arr") throw DataError(path.string() + ": expected header timestamp,arr");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 2) throw DataError(path.string() + ":" + std::to_string(i + 1) + ": malformed row");
        out.timestamps.push_back(std::stoll(std::string(fields[0])));
        out.values.push_back(parse_double(fields[1]));
    }
    return out;
}

}  // namespace arrkit::indicator
