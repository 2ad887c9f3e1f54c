#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace arrkit::stats {

// 1 - SS_res / SS_tot. Throws on constant y_true or fewer than 2 values.
double r_squared(std::span<const double> y_true, std::span<const double> y_pred);

// P(score+ > score-) + P(tie) / 2 via average ranks. Labels are 0/1.
double auroc(std::span<const std::uint8_t> labels, std::span<const double> scores);
double auroc(std::span<const double> labels, std::span<const double> scores);

// 1-based ranks, ties share their average rank.
std::vector<double> average_ranks(std::span<const double> values);

double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace arrkit::stats
