#include "arrkit/metrics/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "arrkit/core/error.hpp"
#include "arrkit/core/text.hpp"

namespace arrkit::metrics {

std::vector<double> block_square_sums(const ReturnsPanel& base, std::size_t asset) {
    const WindowGrid blocks = window_grid(base, Frequency::min5);
    std::vector<double> out(blocks.size());
    for (std::size_t w = 0; w < blocks.size(); ++w) {
        const auto [b, e] = blocks.rows[w];
        double acc = 0.0;
        for (std::size_t t = b; t < e; ++t) {
            const double r = base.returns(t, asset);
            acc += r * r;
        }
        out[w] = acc;
    }
    return out;
}

std::vector<double> realized_variance(const ReturnsPanel& base, std::size_t asset, const WindowGrid& grid) {
    if (asset >= base.assets()) throw Error("realized_variance: asset index out of range");
    for (const auto& [b, e] : grid.rows)
        if (b == e) throw Error("realized_variance: empty window");
    return aggregate_blocks(grid, block_square_sums(base, asset));
}

RiskSeries log_realized_volatility(const ReturnsPanel& base, std::size_t asset, const WindowGrid& grid) {
    const auto rv = realized_variance(base, asset, grid);
    RiskSeries out;
    out.kind = SeriesKind::log_rv;
    out.interval = grid.frequency;
    for (std::size_t w = 0; w < rv.size(); ++w) {
        if (rv[w] > 0.0) {
            out.timestamps.push_back(grid.stamps[w]);
            out.values.push_back(std::log(rv[w]));
        }
    }
    return out;
}

std::vector<double> drawdown(std::span<const double> prices) {
    std::vector<double> dd(prices.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0)) throw Error("drawdown: prices must be positive");
        peak = std::max(peak, prices[i]);
        dd[i] = 1.0 - prices[i] / peak;
    }
    return dd;
}

double ewm_decay(double half_life) {
    if (!(half_life > 0.0)) throw Error("half-life must be positive");
    return std::exp(-std::numbers::ln2 / half_life);
}

std::vector<double> ewm_mean(std::span<const double> series, double half_life) {
    const double d = ewm_decay(half_life);
    std::vector<double> out(series.size());
    double w = 0.0, m = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        w = d * w + 1.0;
        m += (series[t] - m) / w;
        out[t] = m;
    }
    return out;
}

EwmStats ewm_stats(std::span<const double> series, double half_life) {
    if (series.size() < 2) throw Error("ewm_stats: fewer than 2 observations");
    const double d = ewm_decay(half_life);
    EwmStats out{std::vector<double>(series.size()), std::vector<double>(series.size())};
    // West's weighted update with old weights decayed by d each step.
    double w = 0.0, m = 0.0, s = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        const double x = series[t];
        w = d * w + 1.0;
        const double m_old = m;
        m += (x - m_old) / w;
        s = d * s + (x - m_old) * (x - m);
        out.mean[t] = m;
        out.std[t] = std::sqrt(std::max(0.0, s / w));
    }
    return out;
}

CrashLabels crash_labels(const RiskSeries& returns, double lambda, double threshold) {
    const auto stats = ewm_stats(returns.values, lambda);
    CrashLabels out;
    out.lambda = lambda;
    out.threshold = threshold;
    const auto warmup = static_cast<std::size_t>(std::ceil(3.0 * lambda));
    for (std::size_t t = warmup; t < returns.size(); ++t) {
        if (!(stats.std[t] > 0.0)) continue;
        const double z = (returns.values[t] - stats.mean[t]) / stats.std[t];
        out.timestamps.push_back(returns.timestamps[t]);
        out.zscores.push_back(z);
        out.labels.push_back(z < threshold ? 1 : 0);
    }
    return out;
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) throw Error("percentile of an empty series");
    if (p < 0.0 || p > 1.0) throw Error("percentile rank must be in [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<double> winsorize(std::span<const double> series, double lower, double upper) {
    if (series.empty()) throw Error("winsorize: empty series");
    std::vector<double> v(series.begin(), series.end());
    const double lo = percentile(v, lower);
    const double hi = percentile(v, upper);
    for (double& x : v) x = std::clamp(x, lo, hi);
    return v;
}

void write_series_csv(const RiskSeries& series, const std::filesystem::path& path) {
    std::string out = "timestamp,value\n";
    for (std::size_t i = 0; i < series.size(); ++i)
        out += std::to_string(series.timestamps[i]) + "," + format_double(series.values[i]) + "\n";
    write_file(path, out);
}

void write_crash_csv(const CrashLabels& labels, const std::filesystem::path& path) {
    std::string out = "timestamp,label,zscore\n";
    for (std::size_t i = 0; i < labels.size(); ++i)
        out += std::to_string(labels.timestamps[i]) + "," + std::to_string(labels.labels[i]) + "," +
               format_double(labels.zscores[i]) + "\n";
    write_file(path, out);
}

}  // namespace arrkit::metrics
