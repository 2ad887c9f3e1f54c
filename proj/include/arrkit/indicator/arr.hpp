#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "arrkit/core/reconstruction.hpp"
#include "arrkit/metrics/returns.hpp"
#include "arrkit/metrics/risk.hpp"

namespace arrkit::indicator {

enum class Source { autoencoder, pca };

std::string_view source_name(Source s);
Source parse_source(std::string_view name);

// Reconstruction ratio per window: sum of squared reconstruction errors over
// the window and all assets divided by the sum of squared returns.
struct ArrSeries {
    std::vector<std::int64_t> timestamps;  // window right edges
    std::vector<double> values;
    std::vector<double> numerators;
    std::vector<double> denominators;
    metrics::Frequency interval = metrics::Frequency::min5;
    Source source = Source::autoencoder;
    bool smoothed = false;

    std::size_t size() const { return values.size(); }
};

// Per 5-minute block sums over all assets of a T x N panel aligned with
// `base` (a 1-second returns panel).
std::vector<double> block_sums(const Matrix& values, const metrics::ReturnsPanel& base);

// Windows with a zero denominator are left out.
ArrSeries compute_arr(const Reconstruction& rec, const metrics::ReturnsPanel& base, metrics::Frequency interval,
                      Source source, metrics::WeekMode week_mode = metrics::WeekMode::rolling);

// Steps of `f` in one trading day (78, 6, 1, 1 for rolling weeks, 0.2 for
// non-overlapping weeks).
double steps_per_day(metrics::Frequency f, metrics::WeekMode week_mode = metrics::WeekMode::rolling);

// EWMA with a half-life of `half_life` steps.
ArrSeries smooth_arr(const ArrSeries& series, double half_life);

struct Alignment {
    std::vector<std::int64_t> timestamps;
    std::vector<double> arr;
    std::vector<double> risk;
    double spearman = 0.0;
};

// Inner join on timestamps; both paired vectors are then winsorized at the
// 1st/99th percentiles.
Alignment arr_risk_alignment(const ArrSeries& arr, const metrics::RiskSeries& risk);

metrics::RiskSeries as_risk_series(const ArrSeries& arr);

void write_arr_csv(const ArrSeries& series, const std::filesystem::path& path);
ArrSeries read_arr_csv(const std::filesystem::path& path, metrics::Frequency interval, Source source);

}  // namespace arrkit::indicator
