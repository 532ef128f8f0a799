#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "blocksplit/bounds.hpp"
#include "blocksplit/errors.hpp"
#include "blocksplit/spectral.hpp"
#include "blocksplit/strategies.hpp"

using namespace blocksplit;

namespace {

Eigen::MatrixXd to_eigen(const TransitionMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.dim());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = static_cast<double>(a.at(i, j));
    }
    return m;
}

}  // namespace

TEST_CASE("build_matrix (15, 4) entries") {
    const auto a = build_matrix(SplitParams(15, 4));
    REQUIRE(a.dim() == 8);
    CHECK(a.sizes.front() == 8);
    CHECK(a.sizes.back() == 15);
    CHECK(a.by_size(8, 8) == -8);
    CHECK(a.by_size(8, 12) == 24);
    CHECK(a.by_size(8, 13) == 13);
    CHECK(a.by_size(8, 14) == 14);
    CHECK(a.by_size(8, 15) == 15);
    CHECK(a.by_size(8, 9) == 0);
    CHECK(a.by_size(9, 13) == 13);
    CHECK(a.by_size(12, 8) == 8);
    for (int k = 8; k <= 15; ++k) CHECK(a.by_size(k, k) == -k);
    CHECK_THROWS_AS(a.index_of(7), ParameterError);
}

TEST_CASE("build_matrix r = 1 has the 2B corner") {
    for (int b : {5, 15, 63}) {
        const auto a = build_matrix(SplitParams(b, 1));
        const int d = (b + 1) / 2;
        CHECK(a.by_size(d, b) == 2 * b);
        for (int k = d + 1; k <= b; ++k) CHECK(a.by_size(k, k - 1) == k - 1);
        CHECK(left_identity_defect(a) == 0);
    }
}

TEST_CASE("build_matrix rejects bad parameters") {
    CHECK_THROWS_AS(build_matrix(SplitParams(16, 3)), ParameterError);
    CHECK_THROWS_AS(build_matrix(SplitParams(15, 8)), ParameterError);
}

TEST_CASE("Metzler structure and column sums") {
    for (int b = 5; b <= 61; b += 2) {
        for (int r = 1; 2 * r < b; ++r) {
            const auto a = build_matrix(SplitParams(b, r));
            for (std::size_t j = 0; j < a.dim(); ++j) {
                const int k = a.sizes[j];
                std::int64_t col = 0;
                for (std::size_t i = 0; i < a.dim(); ++i) {
                    const auto e = a.at(i, j);
                    if (i == j) {
                        REQUIRE(e == -k);
                    } else {
                        REQUIRE(e >= 0);
                    }
                    REQUIRE(e % k == 0);
                    const auto q = e / k;
                    REQUIRE((q >= -1 && q <= 2));
                    col += a.sizes[i] * e;
                }
                REQUIRE(col == static_cast<std::int64_t>(r) * k);
            }
        }
    }
}

TEST_CASE("outcome column is the even split change times k") {
    const SplitParams p(31, 7);
    const auto a = build_matrix(p);
    for (int k = 16; k <= 31; ++k) {
        const auto col = outcome_column(p, k);
        std::vector<std::int64_t> want(a.dim(), 0);
        for (int s : even_split_outcome(k, p).sizes) want[a.index_of(s)] += k;
        want[a.index_of(k)] -= k;
        CHECK(col == want);
        for (std::size_t i = 0; i < a.dim(); ++i) CHECK(a.at(i, a.index_of(k)) == col[i]);
    }
}

TEST_CASE("support sets") {
    CHECK(support_set(SplitParams(15, 4)) == std::vector<int>{8, 12});
    CHECK(support_set(SplitParams(15, 2)) == std::vector<int>{8, 10, 12, 14});
    const auto full = support_set(SplitParams(15, 3));
    CHECK(full.size() == 8);
    for (int b = 5; b <= 101; b += 2) {
        const int d = (b + 1) / 2;
        for (int r = 1; 2 * r < b; ++r) {
            const auto s = support_set(SplitParams(b, r));
            REQUIRE(static_cast<int>(s.size()) == d / std::gcd(d, r));
            REQUIRE(s.front() == d);
            for (int x : s) {
                const int nxt = d + ((x - d + r) % d);
                REQUIRE(std::binary_search(s.begin(), s.end(), nxt));
            }
        }
    }
}

TEST_CASE("restrict (15, 4)") {
    const auto a = build_matrix(SplitParams(15, 4));
    const auto s = restrict(a, support_set(a.params));
    REQUIRE(s.dim() == 2);
    CHECK(s.at(0, 0) == -8);
    CHECK(s.at(0, 1) == 24);
    CHECK(s.at(1, 0) == 8);
    CHECK(s.at(1, 1) == -12);
    CHECK(strongly_connected(s));
    CHECK(left_identity_defect(s) == 0);
}

TEST_CASE("restricted matrices are strongly connected; the full one need not be") {
    for (int b = 5; b <= 63; b += 2) {
        for (int r = 1; 2 * r < b; ++r) {
            const auto a = build_matrix(SplitParams(b, r));
            const auto s = restrict(a, support_set(a.params));
            REQUIRE(strongly_connected(s));
            REQUIRE(left_identity_defect(s) == 0);
        }
    }
    CHECK_FALSE(strongly_connected(build_matrix(SplitParams(15, 4))));
}

TEST_CASE("principal eigenvector (15, 4)") {
    const auto sol = solve_spectral(SplitParams(15, 4));
    REQUIRE(sol.u.size() == 2);
    CHECK(sol.u[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(sol.u[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(sol.predicted_fullness == doctest::Approx(28.0 / 45.0).epsilon(1e-14));
    CHECK(predicted_fullness(sol) == doctest::Approx(28.0 / 45.0).epsilon(1e-14));
}

TEST_CASE("principal eigenvector (63, 1) closed form") {
    const auto sol = solve_spectral(SplitParams(63, 1));
    REQUIRE(sol.sizes.size() == 32);
    double norm = 0.0;
    for (int k = 32; k <= 63; ++k) norm += 1.0 / (static_cast<double>(k) * (k + 1));
    for (std::size_t i = 0; i < sol.sizes.size(); ++i) {
        const double k = sol.sizes[i];
        CHECK(sol.u[i] == doctest::Approx(1.0 / (k * (k + 1)) / norm).epsilon(1e-12));
    }
    const double want = (harmonic(64) - harmonic(32)) * 64.0 / 63.0;
    CHECK(std::abs(sol.predicted_fullness - want) < 1e-12);
}

TEST_CASE("residual, positivity and fullness range for every odd B up to 255") {
    for (int b = 5; b <= 255; b += 2) {
        for (int r = 1; 2 * r < b; r += (b > 101 ? 3 : 1)) {
            const auto sol = solve_spectral(SplitParams(b, r));
            const double umax = *std::max_element(sol.u.begin(), sol.u.end());
            CAPTURE(b);
            CAPTURE(r);
            REQUIRE(sol.residual <= 1e-10 * umax);
            REQUIRE(*std::min_element(sol.u.begin(), sol.u.end()) > 0.0);
            REQUIRE(std::abs(std::accumulate(sol.u.begin(), sol.u.end(), 0.0) - 1.0) < 1e-12);
            REQUIRE(sol.predicted_fullness > 0.5);
            REQUIRE(sol.predicted_fullness <= 1.0);
        }
    }
}

TEST_CASE("intra-class relations") {
    const auto small = intra_class_check(solve_spectral(SplitParams(15, 4)));
    CHECK(small.ratio_ok);
    CHECK(small.product_ok);
    CHECK(small.ratio_checks == 1);
    const auto rep = intra_class_check(solve_spectral(SplitParams(63, 2)));
    CHECK(rep.ratio_ok);
    CHECK(rep.product_ok);
    CHECK(rep.ratio_checks > 0);
    CHECK(rep.worst_relative < 1e-9);

    auto broken = solve_spectral(SplitParams(63, 2));
    broken.u[5] *= 1.01;
    CHECK_FALSE(intra_class_check(broken).ratio_ok);
}

TEST_CASE("spectral projection (15, 4)") {
    const auto sol = solve_spectral(SplitParams(15, 4));
    const auto p = spectral_projection(sol);
    CHECK(p(0, 0) == doctest::Approx(16.0 / 28.0));
    CHECK(p(0, 1) == doctest::Approx(24.0 / 28.0));
    CHECK(p(1, 0) == doctest::Approx(8.0 / 28.0));
    CHECK(p(1, 1) == doctest::Approx(12.0 / 28.0));
}

TEST_CASE("spectral projection identities") {
    for (auto [b, r] : {std::pair{15, 4}, {31, 5}, {63, 2}, {63, 10}, {127, 1}}) {
        const auto a = build_matrix(SplitParams(b, r));
        const auto as = restrict(a, support_set(a.params));
        const auto sol = principal_eigenvector(as);
        const auto p = spectral_projection(sol);
        const Eigen::MatrixXd pe = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                               Eigen::RowMajor>>(
            p.data.data(), static_cast<Eigen::Index>(p.rows), static_cast<Eigen::Index>(p.cols));
        const Eigen::MatrixXd ae = to_eigen(as);
        const double scale = pe.cwiseAbs().maxCoeff();
        CHECK((pe * pe - pe).cwiseAbs().maxCoeff() <= 1e-12 * scale);
        CHECK((pe * ae - r * pe).cwiseAbs().maxCoeff() <= 1e-9 * scale * b);
        CHECK((ae * pe - r * pe).cwiseAbs().maxCoeff() <= 1e-9 * scale * b);
    }
}

TEST_CASE("perron margin (15, 4) by hand") {
    const auto a = build_matrix(SplitParams(15, 4));
    const auto as = restrict(a, support_set(a.params));
    const auto rep = perron_margin(as, principal_eigenvector(as));
    CHECK(rep.certified());
    CHECK(rep.shift == 15.0);
    CHECK(rep.dominant == doctest::Approx(19.0).epsilon(1e-10));
    CHECK(rep.rho2 == doctest::Approx(9.0).epsilon(1e-9));
    CHECK(rep.gap == doctest::Approx(10.0).epsilon(1e-9));

    const Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(as));
    std::vector<double> ev;
    for (const auto& l : es.eigenvalues()) ev.push_back(l.real());
    std::sort(ev.begin(), ev.end());
    CHECK(ev[0] == doctest::Approx(-24.0));
    CHECK(ev[1] == doctest::Approx(4.0));
}

TEST_CASE("perron margin and eigenvector agree with a general eigensolver") {
    for (int b : {15, 31, 63}) {
        for (int r : {1, 2, 3, 4, (b - 1) / 2}) {
            CAPTURE(b);
            CAPTURE(r);
            const auto a = build_matrix(SplitParams(b, r));
            const auto as = restrict(a, support_set(a.params));
            const auto sol = principal_eigenvector(as);
            const auto rep = perron_margin(as, sol);
            REQUIRE(rep.conclusive());
            CHECK(rep.dominant == doctest::Approx(r + b).epsilon(1e-8));

            const Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(as));
            const auto& vals = es.eigenvalues();
            Eigen::Index at_r = 0;
            for (Eigen::Index i = 0; i < vals.size(); ++i) {
                if (std::abs(vals[i] - std::complex<double>(r, 0)) <
                    std::abs(vals[at_r] - std::complex<double>(r, 0))) {
                    at_r = i;
                }
            }
            CHECK(std::abs(vals[at_r] - std::complex<double>(r, 0)) < 1e-8 * b);
            double rho2 = 0.0;
            double max_real_other = -1e300;
            for (Eigen::Index i = 0; i < vals.size(); ++i) {
                if (i == at_r) continue;
                rho2 = std::max(rho2, std::abs(vals[i] + std::complex<double>(b, 0)));
                max_real_other = std::max(max_real_other, vals[i].real());
            }
            CHECK(max_real_other < r);
            CHECK(std::abs(rep.rho2 - rho2) < 1e-6 * (r + b));
            CHECK(rep.gap > 0.0);

            Eigen::VectorXd v = es.eigenvectors().col(at_r).real();
            v /= v.sum();
            for (std::size_t i = 0; i < sol.u.size(); ++i) {
                CHECK(sol.u[i] == doctest::Approx(v(static_cast<Eigen::Index>(i))).epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("principal eigenvector rejects a reducible matrix") {
    const auto a = build_matrix(SplitParams(15, 4));
    CHECK_THROWS_AS(principal_eigenvector(a), SpectralError);
}

TEST_CASE("matrix csv") {
    const auto a = build_matrix(SplitParams(15, 4));
    const auto path = std::filesystem::temp_directory_path() / "blocksplit_matrix_test.csv";
    write_matrix_csv(a, path.string());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "size,8,9,10,11,12,13,14,15");
    std::string first;
    std::getline(in, first);
    CHECK(first == "8,-8,0,0,0,24,13,14,15");
    std::filesystem::remove(path);
    CHECK_THROWS_AS(write_matrix_csv(a, "/nonexistent-dir/x.csv"), IoError);
}
