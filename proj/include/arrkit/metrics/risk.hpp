#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "arrkit/metrics/returns.hpp"

namespace arrkit::metrics {

enum class SeriesKind { log_rv, drawdown, ret, arr };

struct RiskSeries {
    std::vector<std::int64_t> timestamps;
    std::vector<double> values;
    SeriesKind kind = SeriesKind::ret;
    Frequency interval = Frequency::min5;

    std::size_t size() const { return values.size(); }
};

// Realized variance of one asset for every window of `grid`, zero windows
// included. Coarse windows are sums of their 5-minute block sums.
std::vector<double> realized_variance(const ReturnsPanel& base, std::size_t asset, const WindowGrid& grid);

// Per 5-minute block sums of squared 1-second returns for one asset.
std::vector<double> block_square_sums(const ReturnsPanel& base, std::size_t asset);

// log(RV) on the windows where RV > 0.
RiskSeries log_realized_volatility(const ReturnsPanel& base, std::size_t asset, const WindowGrid& grid);

// DD(t) = 1 - p(t) / max_{s<=t} p(s).
std::vector<double> drawdown(std::span<const double> prices);

// exp(-ln 2 / half_life).
double ewm_decay(double half_life);

struct EwmStats {
    std::vector<double> mean;
    std::vector<double> std;
};

// Exponentially weighted mean and standard deviation using normalized
// weights over all history up to and including t; std is the square root of
// the weighted second central moment.
EwmStats ewm_stats(std::span<const double> series, double half_life);

// EWMA mean only; valid for a single observation.
std::vector<double> ewm_mean(std::span<const double> series, double half_life);

struct CrashLabels {
    std::vector<std::int64_t> timestamps;
    std::vector<std::uint8_t> labels;
    std::vector<double> zscores;
    double lambda = 10.0;
    double threshold = -1.5;

    std::size_t size() const { return labels.size(); }
};

// Crash indicator c(t) = [ (r(t) - m(t)) / s(t) < threshold ]. The first
// ceil(3 * lambda) steps are warm-up and stamps with s(t) = 0 are unlabeled;
// neither appears in the output.
CrashLabels crash_labels(const RiskSeries& returns, double lambda = 10.0, double threshold = -1.5);

// Linear interpolation between order statistics at rank p * (n - 1).
double percentile(std::vector<double> values, double p);

std::vector<double> winsorize(std::span<const double> series, double lower = 0.01, double upper = 0.99);

void write_series_csv(const RiskSeries& series, const std::filesystem::path& path);
void write_crash_csv(const CrashLabels& labels, const std::filesystem::path& path);

}  // namespace arrkit::metrics
