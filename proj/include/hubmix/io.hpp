#pragma once

#include <string>
#include <vector>

#include "hubmix/harness.hpp"
#include "hubmix/spectrum.hpp"

namespace hubmix {

// CSV schemas (exact headers, 17 significant digits, '\n' line endings):
//   trials:      seed,n,k,q,lambda,method,residual,wall_ms
//   sweep:       group,count,mean,std,median,p05,p95
//   eigenvalues: re,im,mult,method
// Failed trials appear with lambda = nan, so attempted = rows always.

std::string format_double(double v);  // %.17g

std::string trials_csv(const std::vector<TrialRecord>& records);
std::string sweep_csv(const SweepTable& table);
std::string eigenvalue_csv(const Spectrum& spectrum);

std::vector<TrialRecord> parse_trials_csv(const std::string& text);

// Fig. 3 style: 2-D histogram of (ln n, ln lambda), 40 x 60 bins, linear
// gray scale, one panel per method present in the records.
std::string svg_histogram(const std::vector<TrialRecord>& records);

// Fig. 5 style: solid trimmed-mean curve with dashed mean +/- std companions.
std::string svg_curve(const SweepTable& table);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace hubmix
