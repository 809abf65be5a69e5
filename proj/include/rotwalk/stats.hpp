#pragma once

// Normal CDF, one-sample Kolmogorov-Smirnov statistic, and the fixed-range
// histogram used by the experiment reports.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace rotwalk {

// Phi via erf; absolute error well under 1e-7 (the contractual budget).
inline double normal_cdf(double z) { return 0.5 * (1.0 + std::erf(z * M_SQRT1_2)); }

// D = sup_x |F_emp(x) - Phi(x)|. Sorts a copy unless the caller says the
// samples are already sorted.
inline double ks_statistic(std::vector<double> samples, bool sorted = false) {
    if (samples.empty()) return 0.0;
    if (!sorted) std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        double f = normal_cdf(samples[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    return d;
}

struct Histogram {
    double lo = -5.0, hi = 5.0;
    int bins = 80;
    std::vector<std::uint64_t> counts;
    std::uint64_t below = 0, above = 0;  // outlier tallies
    std::uint64_t total = 0;

    explicit Histogram(int nbins = 80, double l = -5.0, double h = 5.0)
        : lo(l), hi(h), bins(nbins), counts(static_cast<size_t>(nbins), 0) {}

    void add(double v) {
        ++total;
        if (v < lo) { ++below; return; }
        if (v >= hi) { ++above; return; }
        int b = static_cast<int>((v - lo) / (hi - lo) * bins);
        if (b < 0) b = 0;
        if (b >= bins) b = bins - 1;
        ++counts[static_cast<size_t>(b)];
    }

    double bin_left(int b) const { return lo + (hi - lo) * b / bins; }
    double bin_right(int b) const { return lo + (hi - lo) * (b + 1) / bins; }

    // CSV per the report contract: header, one row per bin, then two outlier
    // rows bounded by -inf / +inf. Densities are per unit length; the outlier
    // rows carry the raw fraction of samples instead.
    std::string to_csv() const {
        char buf[160];
        std::string out = "bin_left,bin_right,count,density\n";
        double width = (hi - lo) / bins;
        for (int b = 0; b < bins; ++b) {
            double dens = total ? counts[b] / (total * width) : 0.0;
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%llu,%.12g\n", bin_left(b), bin_right(b),
                          static_cast<unsigned long long>(counts[b]), dens);
            out += buf;
        }
        double fb = total ? static_cast<double>(below) / total : 0.0;
        double fa = total ? static_cast<double>(above) / total : 0.0;
        std::snprintf(buf, sizeof(buf), "-inf,%.12g,%llu,%.12g\n", lo,
                      static_cast<unsigned long long>(below), fb);
        out += buf;
        std::snprintf(buf, sizeof(buf), "%.12g,+inf,%llu,%.12g\n", hi,
                      static_cast<unsigned long long>(above), fa);
        out += buf;
        return out;
    }
};

}  // namespace rotwalk
