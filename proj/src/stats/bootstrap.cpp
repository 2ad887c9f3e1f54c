#include "arrkit/stats/bootstrap.hpp"

#include "arrkit/core/error.hpp"
#include "arrkit/core/random.hpp"
#include "arrkit/stats/metrics.hpp"

namespace arrkit::stats {

Metric r_squared_metric() {
    return [](std::span<const double> y, std::span<const double> p) { return r_squared(y, p); };
}

Metric auroc_metric() {
    return [](std::span<const double> y, std::span<const double> p) { return auroc(y, p); };
}

namespace {

void gather(const Matrix& m, const std::vector<std::size_t>& rows, std::vector<double>& out) {
    out.resize(rows.size() * m.cols());
    std::size_t k = 0;
    for (std::size_t r : rows)
        for (double v : m.row(r)) out[k++] = v;
}

}  // namespace

BootstrapResult paired_bootstrap(const Matrix& y_true, const Matrix& pred_a, const Matrix& pred_b, const Metric& metric,
                                 std::size_t resamples, std::uint64_t seed) {
    if (pred_a.rows() != y_true.rows() || pred_a.cols() != y_true.cols() || pred_b.rows() != y_true.rows() ||
        pred_b.cols() != y_true.cols())
        throw Error("paired_bootstrap: predictions are not aligned with the targets");
    if (resamples == 0) throw Error("paired_bootstrap: resample count must be positive");

    BootstrapResult out;
    out.null_description = "metric(A) <= metric(B); p = share of resampled differences <= 0";
    out.metric_a = metric(y_true.flat(), pred_a.flat());
    out.metric_b = metric(y_true.flat(), pred_b.flat());
    out.observed_diff = out.metric_a - out.metric_b;

    const std::size_t n = y_true.rows();
    const std::size_t max_redraws = 100 * resamples;
    Rng rng(seed);
    std::vector<std::size_t> rows(n);
    std::vector<double> y, a, b;
    std::size_t failures = 0;
    while (out.samples.size() < resamples) {
        for (auto& r : rows) r = rng.index(n);
        gather(y_true, rows, y);
        gather(pred_a, rows, a);
        gather(pred_b, rows, b);
        try {
            out.samples.push_back(metric(y, a) - metric(y, b));
        } catch (const Error&) {
            ++out.redraws;
            if (++failures > max_redraws) throw Error("paired_bootstrap: metric undefined on too many resamples");
        }
    }
    std::size_t fail = 0;
    for (double d : out.samples)
        if (d <= 0.0) ++fail;
    out.p_value = static_cast<double>(fail) / static_cast<double>(resamples);
    return out;
}

BootstrapResult paired_bootstrap(std::span<const double> y_true, std::span<const double> pred_a,
                                 std::span<const double> pred_b, const Metric& metric, std::size_t resamples,
                                 std::uint64_t seed) {
    auto column = [](std::span<const double> v) { return Matrix(v.size(), 1, std::vector<double>(v.begin(), v.end())); };
    return paired_bootstrap(column(y_true), column(pred_a), column(pred_b), metric, resamples, seed);
}

nlohmann::json to_json(const BootstrapResult& r, bool include_samples) {
    nlohmann::json j{{"metric_a", r.metric_a},       {"metric_b", r.metric_b},
                     {"observed_diff", r.observed_diff}, {"p_value", r.p_value},
                     {"resamples", r.samples.size()},   {"redraws", r.redraws},
                     {"null", r.null_description}};
    if (include_samples) j["samples"] = r.samples;
    return j;
}

}  // namespace arrkit::stats
