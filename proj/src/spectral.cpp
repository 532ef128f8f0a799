#include "blocksplit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <numeric>

#include "blocksplit/errors.hpp"
#include "blocksplit/strategies.hpp"

namespace blocksplit {

namespace {

void require_analysis_range(const SplitParams& params) {
    const int b = params.block_size();
    const int r = params.batch_size();
    if (b % 2 == 0) {
        throw ParameterError("transition matrix needs odd B, got B=" + std::to_string(b));
    }
    if (2 * r >= b) {
        throw ParameterError("transition matrix needs r < B/2, got r=" + std::to_string(r));
    }
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

std::vector<double> mat_vec(const DenseMatrix& a, const std::vector<double>& x) {
    std::vector<double> y(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

/// a^(2^squarings), rescaled after every product so entries stay near one.
DenseMatrix scaled_power(DenseMatrix a, int squarings) {
    for (int s = 0; s < squarings; ++s) {
        a = multiply(a, a);
        const double m = max_abs(a.data);
        if (m == 0.0) break;
        for (double& x : a.data) x /= m;
    }
    return a;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Largest eigenvalue modulus of a real 2x2 matrix.
double max_modulus_2x2(double a, double b, double c, double d) {
    const double half_trace = 0.5 * (a + d);
    const std::complex<double> disc = std::sqrt(std::complex<double>(half_trace * half_trace - (a * d - b * c)));
    return std::max(std::abs(half_trace + disc), std::abs(half_trace - disc));
}

}  // namespace

std::size_t TransitionMatrix::index_of(int size) const {
    const auto it = std::lower_bound(sizes.begin(), sizes.end(), size);
    if (it == sizes.end() || *it != size) {
        throw ParameterError("size " + std::to_string(size) + " is not a matrix label");
    }
    return static_cast<std::size_t>(it - sizes.begin());
}

std::int64_t TransitionMatrix::by_size(int row_size, int col_size) const {
    return at(index_of(row_size), index_of(col_size));
}

TransitionMatrix build_matrix(const SplitParams& params) {
    require_analysis_range(params);
    const int b = params.block_size();
    const int r = params.batch_size();
    const int d = params.require_half();
    TransitionMatrix a{params, {}, {}};
    a.sizes.resize(static_cast<std::size_t>(d));
    std::iota(a.sizes.begin(), a.sizes.end(), d);
    a.entries.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(d), 0);
    const auto ix = [d](int size) { return static_cast<std::size_t>(size - d); };

    a.at(ix(d), ix(d)) = -d;
    a.at(ix(d), ix(b + 1 - r)) = 2 * (b + 1 - r);
    for (int k = b + 2 - r; k <= b; ++k) a.at(ix(d), ix(k)) = k;
    for (int k = d + 1; k <= d + r - 1; ++k) {
        a.at(ix(k), ix(k)) = -k;
        a.at(ix(k), ix(d + k - r)) = d + k - r;
    }
    for (int k = d + r; k <= b; ++k) {
        a.at(ix(k), ix(k)) = -k;
        a.at(ix(k), ix(k - r)) = k - r;
    }
    return a;
}

std::vector<std::int64_t> outcome_column(const SplitParams& params, int k) {
    const int d = params.require_half();
    const int b = params.block_size();
    if (k < d || k > b) throw ParameterError("column size outside [d, B]");
    std::vector<std::int64_t> col(static_cast<std::size_t>(d), 0);
    col[static_cast<std::size_t>(k - d)] -= k;
    for (int s : even_split_outcome(k, params).sizes) {
        if (s < d) {
            throw InvariantError("even split produced size " + std::to_string(s) + " below d");
        }
        col[static_cast<std::size_t>(s - d)] += k;
    }
    return col;
}

std::vector<int> support_set(const SplitParams& params) {
    const int d = params.require_half();
    const int r = params.batch_size();
    std::vector<int> s;
    int x = 0;
    do {
        s.push_back(d + x);
        x = (x + r) % d;
    } while (x != 0);
    std::sort(s.begin(), s.end());
    return s;
}

TransitionMatrix restrict(const TransitionMatrix& a, const std::vector<int>& sizes) {
    TransitionMatrix out{a.params, sizes, {}};
    const std::size_t n = sizes.size();
    out.entries.assign(n * n, 0);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = a.index_of(sizes[i]);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) out.at(i, j) = a.at(idx[i], idx[j]);
    }
    return out;
}

std::int64_t left_identity_defect(const TransitionMatrix& a) {
    const std::int64_t r = a.params.batch_size();
    std::int64_t worst = 0;
    for (std::size_t j = 0; j < a.dim(); ++j) {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < a.dim(); ++i) s += a.sizes[i] * a.at(i, j);
        worst = std::max(worst, std::abs(s - r * a.sizes[j]));
    }
    return worst;
}

bool strongly_connected(const TransitionMatrix& a) {
    const std::size_t n = a.dim();
    if (n == 0) return false;
    const auto reaches_all = [&](bool transpose) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            const std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t w = 0; w < n; ++w) {
                const std::int64_t e = transpose ? a.at(w, v) : a.at(v, w);
                if (w != v && e != 0 && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    };
    return reaches_all(false) && reaches_all(true);
}

DenseMatrix to_dense(const TransitionMatrix& a) {
    DenseMatrix m(a.dim(), a.dim());
    for (std::size_t i = 0; i < a.entries.size(); ++i) m.data[i] = static_cast<double>(a.entries[i]);
    return m;
}

EigenSolution principal_eigenvector(const TransitionMatrix& a_s) {
    const std::size_t n = a_s.dim();
    if (n == 0) throw SpectralError("empty matrix");
    const double r = a_s.params.batch_size();
    if (!strongly_connected(a_s)) throw SpectralError("A_S is reducible");

    // W (A_S - rI) W^{-1} with W = diag(sizes) has zero column sums, so its
    // transpose q is a Markov generator and u = W^{-1} pi for its stationary pi.
    DenseMatrix q(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            q(i, j) = static_cast<double>(a_s.sizes[j]) * static_cast<double>(a_s.at(j, i)) /
                      static_cast<double>(a_s.sizes[i]);
            if (q(i, j) < 0.0) throw SpectralError("A_S has a negative off-diagonal entry");
        }
    }
    double scale = 0.0;
    for (double x : q.data) scale = std::max(scale, x);

    // State reduction: the pivot of each eliminated state is the sum of its
    // remaining off-diagonal rates, so no cancellation can occur.
    std::vector<double> pivot(n, 0.0);
    for (std::size_t k = n; k-- > 1;) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += q(k, j);
        pivot[k] = s;
        if (!(s > 0.0)) {
            throw SpectralError("null space of A_S - rI is not one-dimensional");
        }
        for (std::size_t i = 0; i < k; ++i) {
            const double f = q(i, k) / s;
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < k; ++j) {
                if (j != i) q(i, j) += f * q(k, j);
            }
        }
    }
    std::vector<double> pi(n, 0.0);
    pi[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) s += pi[i] * q(i, k);
        pi[k] = s / pivot[k];
    }

    EigenSolution sol;
    sol.sizes = a_s.sizes;
    sol.w = a_s.sizes;
    sol.block_size = a_s.params.block_size();
    sol.batch_size = a_s.params.batch_size();
    sol.smallest_pivot = n > 1 ? *std::min_element(pivot.begin() + 1, pivot.end()) / scale : 1.0;
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = pi[i] / a_s.sizes[i];
    const double total = std::accumulate(u.begin(), u.end(), 0.0);
    for (double& x : u) x /= total;
    if (!std::all_of(u.begin(), u.end(), [](double x) { return x > 0.0; })) {
        throw SpectralError("principal eigenvector is not strictly positive");
    }

    const auto au = mat_vec(to_dense(a_s), u);
    for (std::size_t i = 0; i < n; ++i) sol.residual = std::max(sol.residual, std::abs(au[i] - r * u[i]));
    sol.u = std::move(u);
    if (sol.residual > 1e-10 * max_abs(sol.u)) {
        throw SpectralError("eigenvector residual " + std::to_string(sol.residual) + " too large");
    }
    sol.predicted_fullness = predicted_fullness(sol);
    return sol;
}

double predicted_fullness(const EigenSolution& sol) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < sol.u.size(); ++i) {
        num += sol.u[i] * sol.w[i];
        den += sol.u[i];
    }
    return num / (static_cast<double>(sol.block_size) * den);
}

EigenSolution solve_spectral(const SplitParams& params) {
    const auto a = build_matrix(params);
    return principal_eigenvector(restrict(a, support_set(params)));
}

IntraClassReport intra_class_check(const EigenSolution& sol) {
    IntraClassReport rep;
    const int r = sol.batch_size;
    const int d = (sol.block_size + 1) / 2;
    const auto value = [&](int size) -> const double* {
        const auto it = std::lower_bound(sol.sizes.begin(), sol.sizes.end(), size);
        if (it == sol.sizes.end() || *it != size) return nullptr;
        return &sol.u[static_cast<std::size_t>(it - sol.sizes.begin())];
    };
    const auto note = [&](double lhs, double rhs, bool& flag) {
        const double rel = std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
        rep.worst_relative = std::max(rep.worst_relative, rel);
        if (rel > 1e-9) flag = false;
    };
    for (int k : sol.sizes) {
        if (k < d + r) continue;
        const double* prev = value(k - r);
        if (prev == nullptr) {
            rep.ratio_ok = false;
            continue;
        }
        ++rep.ratio_checks;
        note(*value(k) * (k + r), *prev * (k - r), rep.ratio_ok);
    }
    for (int j0 : sol.sizes) {
        if (j0 >= d + r) break;
        const double u0 = *value(j0);
        for (int j = j0 + r; j <= sol.block_size; j += r) {
            const double* uj = value(j);
            if (uj == nullptr) {
                rep.product_ok = false;
                continue;
            }
            ++rep.product_checks;
            const double expect = static_cast<double>(j0) * (j0 + r) /
                                   (static_cast<double>(j) * (j + r)) * u0;
            note(*uj, expect, rep.product_ok);
        }
    }
    return rep;
}

DenseMatrix spectral_projection(const EigenSolution& sol) {
    const std::size_t n = sol.u.size();
    double wu = 0.0;
    for (std::size_t i = 0; i < n; ++i) wu += sol.w[i] * sol.u[i];
    if (!(wu > 0.0)) throw SpectralError("<w_S, u> must be positive");
    DenseMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) p(i, j) = sol.u[i] * sol.w[j] / wu;
    }
    return p;
}

PerronReport perron_margin(const TransitionMatrix& a_s, const EigenSolution& sol) {
    constexpr int squarings = 10;
    constexpr int max_rounds = 400;
    const std::size_t n = a_s.dim();
    PerronReport rep;
    rep.shift = a_s.params.block_size();
    const double target = a_s.params.batch_size() + rep.shift;

    DenseMatrix m = to_dense(a_s);
    for (std::size_t i = 0; i < n; ++i) m(i, i) += rep.shift;

    // Dominant root: power iteration on M^(2^s); Collatz-Wielandt bounds use M itself.
    const DenseMatrix t = scaled_power(m, squarings);
    std::vector<double> x(n, 1.0);
    for (int round = 0; round < max_rounds; ++round) {
        ++rep.iterations;
        auto y = mat_vec(t, x);
        const double top = max_abs(y);
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / top;
        const auto mx = mat_vec(m, x);
        double lo = INFINITY;
        double hi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double q = mx[i] / x[i];
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        rep.dominant_lower = lo;
        rep.dominant_upper = hi;
        if (hi - lo <= 1e-12 * hi) {
            rep.dominant_converged = true;
            break;
        }
    }
    rep.dominant = 0.5 * (rep.dominant_lower + rep.dominant_upper);

    // Subdominant modulus: deflate the Perron pair and track a 2D invariant subspace.
    const DenseMatrix p = spectral_projection(sol);
    DenseMatrix md = m;
    for (std::size_t i = 0; i < md.data.size(); ++i) md.data[i] -= target * p.data[i];
    const DenseMatrix td = scaled_power(md, squarings);

    std::vector<double> q1(n), q2(n);
    for (std::size_t i = 0; i < n; ++i) {
        q1[i] = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(i));
        q2[i] = std::cos(0.7 * static_cast<double>(i) + 0.3);
    }
    const auto orthonormalize = [&](std::vector<double>& a, std::vector<double>& b) {
        const double na = std::sqrt(dot(a, a));
        for (double& v : a) v /= na;
        const double proj = dot(a, b);
        for (std::size_t i = 0; i < n; ++i) b[i] -= proj * a[i];
        double nb = std::sqrt(dot(b, b));
        if (nb < 1e-14) {
            for (std::size_t i = 0; i < n; ++i) b[i] = (i % 2 == 0 ? 1.0 : -1.0);
            const double pr = dot(a, b);
            for (std::size_t i = 0; i < n; ++i) b[i] -= pr * a[i];
            nb = std::sqrt(dot(b, b));
        }
        for (double& v : b) v /= nb;
    };
    orthonormalize(q1, q2);

    double prev = -1.0;
    int stable = 0;
    for (int round = 0; round < max_rounds; ++round) {
        ++rep.iterations;
        if (n > 2) {
            q1 = mat_vec(td, q1);
            q2 = mat_vec(td, q2);
            if (max_abs(q1) == 0.0 && max_abs(q2) == 0.0) {
                rep.rho2 = 0.0;
                rep.rho2_converged = true;
                break;
            }
            orthonormalize(q1, q2);
        }
        const auto m1 = mat_vec(md, q1);
        const auto m2 = mat_vec(md, q2);
        const double est = max_modulus_2x2(dot(q1, m1), dot(q1, m2), dot(q2, m1), dot(q2, m2));
        rep.rho2 = est;
        if (n <= 2 || std::abs(est - prev) <= 1e-12 * target) {
            if (n <= 2 || ++stable >= 3) {
                rep.rho2_converged = true;
                break;
            }
        } else {
            stable = 0;
        }
        prev = est;
    }
    rep.gap = target - rep.rho2;
    return rep;
}

void write_matrix_csv(const TransitionMatrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "size";
    for (int s : a.sizes) out << ',' << s;
    out << '\n';
    for (std::size_t i = 0; i < a.dim(); ++i) {
        out << a.sizes[i];
        for (std::size_t j = 0; j < a.dim(); ++j) out << ',' << a.at(i, j);
        out << '\n';
    }
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace blocksplit
