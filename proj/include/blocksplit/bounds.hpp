#pragma once

#include <string>
#include <vector>

namespace blocksplit {

/// One row of the fill table for a given (B, r).
struct BoundResult {
    int row = 0;
    std::string label;    // r/B interval of the row
    double fill = 0.0;
    std::string formula;  // human-readable expression
};

/// Dispatches on r/B (exact rational comparisons) to the row covering it.
BoundResult table_bound(int block_size, int batch_size);

struct DeferredClosedForm {
    int i = 0;
    double fill = 0.0;
    /// u[j - i] = 2i / (j (j + 1)) for j = i .. 2i-1.
    std::vector<double> distribution;
    double distribution_sum = 0.0;
};

/// Stationary fill of deferred even splitting when B/(2i) < r <= B/(2i-1).
/// Throws OutOfRangeError when no such i exists.
DeferredClosedForm deferred_closed_form(int block_size, int batch_size);

/// Largest of the three even-split lower bounds that applies to (B, r).
/// B must be odd; throws OutOfRangeError when r > 5B/12.
double even_split_lower_bound(int block_size, int batch_size);

/// xy(x + y + 2a) / (x^2 + y^2 + a(x + y)).
double f_value(double x, double y, double alpha);

struct FMinReport {
    double min_value = 0.0;
    double x = 0.0;
    double y = 0.0;
    double alpha = 0.0;
    long points = 0;
    bool passed = false;
};

/// Grid scan of f over {1/2 <= x <= 1, 1-a <= y <= 1, y-x >= a, 0 < a < 1/2}
/// followed by a local pattern search from the best grid point.
FMinReport f_min_check(int resolution);

/// H_k with compensated summation. Throws ParameterError for k < 1.
double harmonic(long k);

}  // namespace blocksplit
