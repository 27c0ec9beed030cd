#pragma once

#include <map>
#include <string>
#include <vector>

#include "csd/random_data.hpp"

namespace csd::lab {

/// One randomized-trial measurement of a lhs <~ rhs inequality.
struct ProbeRecord {
    std::string probe;    // series name, e.g. "product_rule.hl"
    std::string variant;  // half-wave sign combination, "" when not applicable
    std::uint64_t seed = 0;
    double scale = 0.0;  // frequency scale of the data (dyadic annulus)
    double s = 0.0, a = 0.0, q = 0.0, r = 0.0, alpha = 0.0, interval = 0.0;
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};

using RecordList = std::vector<ProbeRecord>;

struct ProbeParams {
    int n = 256;
    double length = 2.0 * pi;
    double s = 0.3;
    double a = 0.0;    // fractional-derivative gain (bilinear Strichartz, transference)
    double q = 4.0;
    double r = 2.0;
    double alpha = 0.5;
    double interval = 1.0;  // |I|, time interval [0, |I|]
    int time_samples = 64;  // trapezoid subintervals for mixed norms
    int trials = 100;
    std::vector<double> scales = {1, 2, 4, 8, 16, 32, 64};
    std::uint64_t seed = 12345;
    // Homogeneous product exponents; s1 < 0 means "derive from s": (1-2s, s, s).
    double s1 = -1.0, s2 = -1.0, s3 = -1.0;
};

const std::vector<std::string>& probe_names();

/// Zero-input sanity gate: runs the probe's pipeline on zero fields and
/// returns true iff every lhs is exactly zero.
bool zero_gate(const std::string& name, const ProbeParams& p);

/// Runs one probe over all scales and trials (parallel over trials, one
/// derived seed per trial; records sorted by (series, scale, seed)).
/// Throws std::invalid_argument on parameter/admissibility violations.
RecordList run_probe(const std::string& name, const ProbeParams& p);

RecordList probe_bilinear_strichartz(const ProbeParams& p);
RecordList probe_n_estimate(const ProbeParams& p);
RecordList probe_product_rule(const ProbeParams& p);
RecordList probe_homogeneous_product(const ProbeParams& p);
RecordList probe_trilinear(const ProbeParams& p);
RecordList probe_transference(const ProbeParams& p);

struct SeriesStats {
    std::map<double, double> max_ratio;   // per scale
    std::map<double, double> mean_ratio;  // per scale
    double slope = 0.0;                   // log(ratio) vs log(scale) least squares
    int used = 0;                         // records with positive ratio and scale
};

/// Per-series statistics over a record list.
std::map<std::string, SeriesStats> summarize(const RecordList& recs);

void write_records_csv(const std::string& path, const RecordList& recs);
/// Flat key = value summary (per-scale max/mean ratio and fitted slope).
void write_summary(const std::string& path, const std::string& probe, const ProbeParams& p,
                   const RecordList& recs);

}  // namespace csd::lab
