#include "blocksplit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blocksplit/errors.hpp"

namespace blocksplit {

namespace {

void check_params(int block_size, int batch_size) {
    if (block_size < 3) throw ParameterError("block size B must be at least 3");
    if (batch_size < 1) throw ParameterError("batch size r must be at least 1");
}

double ln2_bound(double a) { return std::numbers::ln2 - 5.0 * a; }

double harmonic_bound(double b, double r) { return 2.0 * (b + 1.0) / (3.0 * b + 1.0 + 2.0 * r); }

constexpr double seven_twelfths = 7.0 / 12.0;

bool feasible(double x, double y, double a) {
    return a > 0.0 && a < 0.5 && x >= 0.5 && x <= 1.0 && y >= 1.0 - a && y <= 1.0 && y - x >= a;
}

}  // namespace

BoundResult table_bound(int block_size, int batch_size) {
    check_params(block_size, batch_size);
    const long b = block_size;
    const long r = batch_size;
    const double a = static_cast<double>(r) / static_cast<double>(b);
    if (10000 * r <= 58 * b) return {2, "(0, 0.0058]", ln2_bound(a), "ln(2) - 5r/B"};
    if (100 * r <= 21 * b) {
        return {3, "(0.0058, 0.21]", harmonic_bound(static_cast<double>(b), static_cast<double>(r)),
                "2(B+1)/(3B+1+2r)"};
    }
    if (18 * r <= 7 * b) return {4, "(0.21, 7/18]", seven_twelfths, "7/12"};
    if (2 * r <= b) return {5, "(7/18, 1/2]", 1.5 * a, "3r/(2B)"};
    if (3 * r <= 2 * b) return {6, "(1/2, 2/3]", 10.0 * a / 9.0, "10r/(9B)"};
    if (r <= b) return {7, "(2/3, 1]", a, "r/B"};
    const double blocks = std::ceil(1.0 + a);
    return {8, "(1, inf)", std::max((0.5 + a) / blocks, 2.0 / 3.0),
            "max{(0.5+r/B)/ceil(1+r/B), 2/3}"};
}

DeferredClosedForm deferred_closed_form(int block_size, int batch_size) {
    check_params(block_size, batch_size);
    const int q = block_size / batch_size;
    if (q == 0) throw OutOfRangeError("no closed form for r > B");
    if (q % 2 == 0) {
        throw OutOfRangeError("r=" + std::to_string(batch_size) +
                              " is not in any (B/(2i), B/(2i-1)] for B=" +
                              std::to_string(block_size));
    }
    DeferredClosedForm res;
    res.i = (q + 1) / 2;
    const double i = res.i;
    res.fill = 2.0 * i * batch_size / block_size * (harmonic(2L * res.i) - harmonic(res.i));
    for (long j = res.i; j <= 2L * res.i - 1; ++j) {
        res.distribution.push_back(2.0 * i / (static_cast<double>(j) * static_cast<double>(j + 1)));
    }
    for (double u : res.distribution) res.distribution_sum += u;
    return res;
}

double even_split_lower_bound(int block_size, int batch_size) {
    check_params(block_size, batch_size);
    if (block_size % 2 == 0) {
        throw ParameterError("even-split lower bounds assume odd B, got B=" +
                             std::to_string(block_size));
    }
    const long b = block_size;
    const long r = batch_size;
    if (12 * r > 5 * b) {
        throw OutOfRangeError("no even-split lower bound for r > 5B/12");
    }
    double best = seven_twelfths;
    if (100 * r <= 21 * b) {
        best = std::max(best, harmonic_bound(static_cast<double>(b), static_cast<double>(r)));
    }
    if (10000 * r <= 58 * b) {
        best = std::max(best, ln2_bound(static_cast<double>(r) / static_cast<double>(b)));
    }
    return best;
}

double f_value(double x, double y, double alpha) {
    return x * y * (x + y + 2.0 * alpha) / (x * x + y * y + alpha * (x + y));
}

FMinReport f_min_check(int resolution) {
    if (resolution < 100) throw ParameterError("f-min grid needs at least 100 points per axis");
    const int n = resolution;
    FMinReport rep;
    rep.min_value = INFINITY;
    for (int k = 1; k < n; ++k) {
        const double a = static_cast<double>(k) / (2.0 * n);
        for (int i = 0; i <= n; ++i) {
            const double x = 0.5 + static_cast<double>(i) / (2.0 * n);
            for (int j = 0; j <= n; ++j) {
                const double y = 1.0 - a + a * static_cast<double>(j) / n;
                if (y - x < a) continue;
                ++rep.points;
                const double v = f_value(x, y, a);
                if (v < rep.min_value) {
                    rep.min_value = v;
                    rep.x = x;
                    rep.y = y;
                    rep.alpha = a;
                }
            }
        }
    }

    // Compass search inside the feasible region, shrinking the step on failure.
    double step = 1.0 / (2.0 * n);
    while (step > 1e-12) {
        bool improved = false;
        for (int axis = 0; axis < 3 && !improved; ++axis) {
            for (double sign : {-1.0, 1.0}) {
                double p[3] = {rep.x, rep.y, rep.alpha};
                p[axis] += sign * step;
                if (!feasible(p[0], p[1], p[2])) continue;
                const double v = f_value(p[0], p[1], p[2]);
                ++rep.points;
                if (v < rep.min_value) {
                    rep.min_value = v;
                    rep.x = p[0];
                    rep.y = p[1];
                    rep.alpha = p[2];
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    rep.passed = rep.min_value >= seven_twelfths - 1e-9;
    return rep;
}

double harmonic(long k) {
    if (k < 1) throw ParameterError("harmonic number needs k >= 1");
    double sum = 0.0;
    double comp = 0.0;
    for (long i = k; i >= 1; --i) {
        const double term = 1.0 / static_cast<double>(i);
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

}  // namespace blocksplit
