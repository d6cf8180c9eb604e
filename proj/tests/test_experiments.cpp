#include <doctest.h>

#include <cmath>

#include "bsc/error.hpp"
#include "bsc/experiments.hpp"

using namespace bsc;

TEST_CASE("arctan ring") {
    CHECK(std::abs(arctan_ring(0.875, 0.75) - std::atan(-25.0)) <= 1e-15);
    CHECK(std::abs(arctan_ring(0.0, 0.0) - std::atan(5.0 * (12.25 + 9.0 - 5.0))) <= 1e-15);
}

TEST_CASE("tabulated widths") {
    CHECK(tabulated_widths(1) == std::vector<int>{3, 5, 7, 9});
    CHECK(tabulated_widths(2) == std::vector<int>{4, 6, 8, 10, 12});
    CHECK(tabulated_widths(4).back() == 18);
    CHECK_THROWS_AS((void)tabulated_widths(6), Error);
}

TEST_CASE("norm table rows and threading") {
    const std::vector<int> two{2};
    const auto serial = norm_table(two, 1, 20, 1);
    REQUIRE(serial.size() == 5);
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i].r == 4 + 2 * static_cast<int>(i));
    const auto parallel = norm_table(two, 1, 20, 4);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(parallel[i].r == serial[i].r);
        CHECK(parallel[i].norm_residual_2 == serial[i].norm_residual_2);
        CHECK(parallel[i].norm_B_inf == serial[i].norm_B_inf);
    }
    const std::vector<int> all{1, 2, 3, 4};
    CHECK(norm_table(all, 1, 14, 8).size() == 22);
    CHECK_THROWS_AS((void)norm_table(all, 1, 13), Error);
    CHECK_THROWS_AS((void)norm_table(two, 3, 10), Error);
}

TEST_CASE("coarsening curves on a small mesh") {
    for (int p = 1; p <= 3; ++p) {
        CurveConfig cfg;
        cfg.p = p;
        cfg.widths = tabulated_widths(p);
        cfg.fine_elements = 32;
        cfg.levels = 3;
        cfg.threads = 2;
        const auto curves = coarsening_curves(cfg);
        REQUIRE(curves.size() == cfg.widths.size() + 1);
        CHECK(curves[0].method == "l2-projection");
        CHECK(curves[1].method == "local-r" + std::to_string(cfg.widths[0]));
        for (const auto& c : curves) {
            REQUIRE(c.points.size() == 4);
            CHECK(c.points[0].dofs == static_cast<long long>((32 + p) * (32 + p)));
            for (std::size_t k = 1; k < c.points.size(); ++k) {
                CHECK(c.points[k].dofs < c.points[k - 1].dofs);
                CHECK(c.points[k].l2_error >= c.points[k - 1].l2_error);
            }
        }
        for (std::size_t k = 0; k < 4; ++k)
            for (std::size_t w = 1; w < curves.size(); ++w)
                CHECK(curves[0].points[k].l2_error <= curves[w].points[k].l2_error + 1e-12);
        // Level 0 is shared by every method.
        for (std::size_t w = 1; w < curves.size(); ++w) CHECK(curves[w].points[0].l2_error == curves[0].points[0].l2_error);
    }
    CurveConfig bad;
    bad.widths = {4};
    bad.fine_elements = 30;
    CHECK_THROWS_AS((void)coarsening_curves(bad), Error);
    bad.fine_elements = 32;
    bad.widths = {5};
    CHECK_THROWS_AS((void)coarsening_curves(bad), Error);
}

TEST_CASE("coarsening curves are deterministic across thread counts") {
    CurveConfig cfg;
    cfg.p = 2;
    cfg.widths = {4, 12};
    cfg.fine_elements = 16;
    cfg.levels = 2;
    const auto a = coarsening_curves(cfg);
    cfg.threads = 3;
    const auto b = coarsening_curves(cfg);
    CHECK(error_curves_csv(a) == error_curves_csv(b));
}

TEST_CASE("localized coefficients") {
    const auto C = localized_coefficients(42, LocalizedRegion{});
    CHECK(C.shape() == std::vector<int>{42, 42});
    CHECK(C.at(30, 30) == 1.0);
    CHECK(C.at(0, 0) == 0.0);
    CHECK(C.at(14, 30) == 1.0);
    CHECK(C.at(13, 30) == 0.0);
}

TEST_CASE("localized experiment") {
    const auto results = localized_experiment(LocalizedConfig{});
    REQUIRE(results.size() == 3);
    CHECK(results[0].method == "l2-projection");
    CHECK(results[0].modified_fraction == 1.0);
    CHECK(std::abs(results[0].linf_relative - 0.29) <= 0.05);
    CHECK(results[1].width == 6);
    CHECK(std::abs(results[1].modified_fraction - 0.18) <= 0.04);
    CHECK(std::abs(results[1].linf_relative - 0.40) <= 0.05);
    CHECK(results[2].width == 8);
    CHECK(std::abs(results[2].modified_fraction - 0.32) <= 0.04);
    CHECK(std::abs(results[2].linf_relative - 0.27) <= 0.05);
    for (const auto& r : results) CHECK(r.coarse.shape() == std::vector<int>{22, 22});
}

TEST_CASE("local error coefficients stay near the region") {
    const LocalizedConfig cfg;
    const auto results = localized_experiment(cfg);
    const SubdivisionMatrix A = build_subdivision_matrix(cfg.p, 21);
    const auto C = localized_coefficients(A.rows(), cfg.region);
    for (std::size_t m = 1; m < results.size(); ++m) {
        const CoarseningOperator B = assemble_left_inverse(A, lookup_parameters(cfg.p, results[m].width));
        const Eigen::MatrixXd R = (A.dense() * B.dense()).cwiseAbs();
        // Fine entries reachable from the region through A B, plus the region itself.
        Eigen::MatrixXd Cm(A.rows(), A.rows());
        for (int i = 0; i < A.rows(); ++i)
            for (int j = 0; j < A.rows(); ++j) Cm(i, j) = C.at(i, j);
        const Eigen::MatrixXd reach = R * Cm * R.transpose() + Cm;
        int outside = 0;
        for (int i = 0; i < A.rows(); ++i)
            for (int j = 0; j < A.rows(); ++j)
                if (reach(i, j) == 0.0) {
                    ++outside;
                    CHECK(results[m].error_coefficients.at(i, j) == 0.0);
                }
        CHECK(outside > 0);
    }
}
