#include <doctest.h>

#include <cmath>

#include "mtqc/error.hpp"
#include "mtqc/resources.hpp"

using namespace mtqc;

namespace {

double rel(double got, double want) { return std::abs(got - want) / want; }

ResourceReport run(int bits, double p = 1e-3, bool medium = false) {
    FactoringJob job;
    job.bits = bits;
    job.medium_range_shuttling = medium;
    ErrorBudget budget;
    budget.p_phys = p;
    return estimate_shor(job, TimingParams{}, budget);
}

}  // namespace

TEST_CASE("calibrated anchors") {
    const auto big = run(2048);
    CHECK(rel(big.wall_time_days(), 110.0) < 0.15);
    CHECK(rel(big.total_ions, 1e9) < 0.15);
    CHECK(rel(run(1024).wall_time_days(), 14.0) < 0.15);
    const auto good = run(2048, 1e-4);
    CHECK(rel(good.wall_time_days(), 10.0) < 0.15);
    CHECK(rel(good.total_ions, 3e8) < 0.15);
    CHECK(rel(run(2048, 1e-4, true).total_ions, 3e6) < 0.15);
    CHECK(big.logical_qubits == 4099);
}

TEST_CASE("runtime scales as n cubed") {
    const auto c = scaling_consistency(run(2048), run(1024));
    CHECK(c.expected == doctest::Approx(8.0));
    CHECK(c.ok);
}

TEST_CASE("short shuttle range gets no reduction") {
    FactoringJob job;
    job.medium_range_shuttling = true;
    job.shuttle_range = 5;
    CHECK(estimate_shor(job).total_ions == doctest::Approx(run(2048).total_ions));
}

TEST_CASE("property: code distance is odd and monotone in the work and in p") {
    ErrorBudget b;
    int prev = 3;
    for (double work = 1.0; work < 1e20; work *= 10.0) {
        const int d = code_distance(b, work);
        CHECK(d % 2 == 1);
        CHECK(d >= prev);
        // Smallest: the next odd distance down would miss the target.
        const double pl = [&](int dd) { return b.prefactor * std::pow(b.p_phys / b.p_threshold, (dd + 1) / 2.0) * work; }(d);
        CHECK(pl <= b.target_total_failure * (1.0 + 1e-9));
        if (d > 3) {
            const double lower = b.prefactor * std::pow(b.p_phys / b.p_threshold, (d - 1) / 2.0) * work;
            CHECK(lower > b.target_total_failure * (1.0 + 1e-9));
        }
        prev = d;
    }
    int last = 0;
    for (double p : {1e-5, 1e-4, 1e-3, 3e-3, 6e-3}) {
        ErrorBudget q;
        q.p_phys = p;
        const int d = code_distance(q, 1e12);
        CHECK(d >= last);
        last = d;
    }
}

TEST_CASE("no distance above threshold") {
    ErrorBudget b;
    b.p_phys = 1.5e-2;
    CHECK_THROWS_AS(code_distance(b, 1e6), NoDistanceSuffices);
}

TEST_CASE("detection chain") {
    const auto r = detection_chain(0.30, 0.80, 0.10);
    CHECK(r.efficiency == doctest::Approx(0.024));
    CHECK(r.efficiency >= 0.015);
    CHECK(r.efficiency <= 0.03);
    CHECK(r.fidelity_class != "degraded");
    CHECK(detection_chain(0.3, 0.5, 0.1).fidelity_class == "degraded");
    CHECK_THROWS_AS(detection_chain(1.2, 0.8, 0.1), ConfigError);
}

TEST_CASE("invalid jobs") {
    FactoringJob job;
    job.bits = 2;
    CHECK_THROWS_AS(estimate_shor(job), ConfigError);
}
