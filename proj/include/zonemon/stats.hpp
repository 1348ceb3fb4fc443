#pragma once

#include <span>

namespace zonemon {

// Shared calibration rule: sample mean plus sample standard deviation
// (n-1 denominator; a single score has deviation 0). Used by the
// autoencoder threshold and by the baseline detectors so that the
// comparison differs only in the scoring function.
double mean_plus_sample_std(std::span<const double> scores);

double sample_mean(std::span<const double> scores);
double sample_std(std::span<const double> scores);

}  // namespace zonemon
