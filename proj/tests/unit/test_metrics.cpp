// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <random>
#include <thread>

#include "doctest.h"
#include "oracles/volume_oracles.hpp"
#include "selrel/errors.hpp"
#include "selrel/metrics.hpp"

using namespace selrel;

namespace {

Volume3 from_mask(Dims3 d, const std::vector<std::size_t>& on, float value = 1.0f) {
    std::vector<float> v(d.count(), 0.0f);
    for (auto i : on) v[i] = value;
    return Volume3(d, v);
}

Volume3 scaled(const Volume3& v, float c) {
    auto d = v.to_vector();
    for (auto& x : d) x *= c;
    return Volume3(v.dims(), d);
}

const Dims3 kD{3, 4, 5};

}  // namespace

TEST_CASE("motion precision") {
    CHECK(motion_precision(Volume3::filled(kD, 1.0f), Volume3::filled(kD, 2.0f)) == 100.0);
    CHECK(motion_precision(from_mask(kD, {1, 2, 3, 4}), from_mask(kD, {2, 3, 4, 9})) == 75.0);
    CHECK_THROWS_AS(motion_precision(Volume3::zeros(kD), Volume3::filled(kD, 1.0f)), EmptyRelevanceError);
    CHECK_THROWS_AS(motion_precision(Volume3::zeros(kD), Volume3::zeros(Dims3{3, 4, 4})), InputError);

    SUBCASE("thresholds are strict") {
        std::vector<float> r(kD.count(), 0.0f), f(kD.count(), 0.0f);
        r[0] = 1000.0f;
        r[1] = 1.0f;       // exactly eps_r = 1e-3 * 1000: excluded
        r[2] = 1.001f;     // included
        f[2] = 0.01f;      // exactly eps_o: excluded
        f[0] = 0.0101f;    // included
        const double p = motion_precision(Volume3(kD, r), Volume3(kD, f));
        CHECK(p == doctest::Approx(50.0));
    }
    SUBCASE("negative relevance is never in the support") {
        std::vector<float> r(kD.count(), -5.0f);
        r[7] = 1.0f;
        CHECK(motion_precision(Volume3(kD, r), from_mask(kD, {7})) == 100.0);
    }
    SUBCASE("explicit absolute eps_r") {
        SupportOptions o;
        o.eps_r = 0.5;
        std::vector<float> r(kD.count(), 0.0f);
        r[1] = 0.6f;
        r[2] = 0.4f;  // below the absolute threshold
        CHECK(motion_precision(Volume3(kD, r), from_mask(kD, {1}), o) == 100.0);
        CHECK(motion_precision(Volume3(kD, r), from_mask(kD, {2}), o) == 0.0);
    }
}

TEST_CASE("motion precision refuses all-below-threshold relevance") {
    SupportOptions o;
    o.eps_r = 2.0;
    CHECK_THROWS_AS(motion_precision(Volume3::filled(kD, 1.0f), Volume3::filled(kD, 1.0f), o), EmptyRelevanceError);
    o.eps_r = -1.0;
    CHECK_THROWS_AS(motion_precision(Volume3::filled(kD, 1.0f), Volume3::filled(kD, 1.0f), o), InputError);
}

TEST_CASE("selectivity ratios") {
    const Volume3 base = from_mask(kD, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    SUBCASE("identical maps") {
        const auto s = selectivity_ratios(base, base);
        CHECK(s.area_pct == 100.0);
        CHECK(s.mass_pct == 100.0);
    }
    SUBCASE("two of ten voxels holding half the mass") {
        std::vector<float> b(kD.count(), 0.0f), s(kD.count(), 0.0f);
        for (int i = 0; i < 10; ++i) b[i] = 5.0f / 8.0f;
        b[0] = b[1] = 2.5f;  // 2 * 2.5 + 8 * 0.625 = 10
        s[0] = s[1] = 2.5f;
        const auto r = selectivity_ratios(Volume3(kD, s), Volume3(kD, b));
        CHECK(r.area_pct == doctest::Approx(20.0));
        CHECK(r.mass_pct == doctest::Approx(50.0));
    }
    SUBCASE("all-zero selective map") {
        const auto s = selectivity_ratios(Volume3::zeros(kD), base);
        CHECK(s.area_pct == 0.0);
        CHECK(s.mass_pct == 0.0);
    }
    CHECK_THROWS_AS(selectivity_ratios(base, Volume3::zeros(kD)), InputError);
    CHECK_THROWS_AS(selectivity_ratios(Volume3::zeros(kD), Volume3::zeros(kD)), EmptyRelevanceError);
    CHECK_THROWS_AS(selectivity_ratios(from_mask(kD, {20}), base), InputError);
}

TEST_CASE("agreement") {
    const Volume3 a = from_mask(kD, {0, 1, 2, 3});
    CHECK(agreement(a, a) == 100.0);
    CHECK(agreement(a, from_mask(kD, {10, 11})) == 0.0);
    const Volume3 b = from_mask(kD, {2, 3, 4, 5});
    CHECK(agreement(a, b) == doctest::Approx(100.0 * 2 / 6));
    CHECK(agreement(a, b, {}, OverlapMode::directional) == 50.0);
    CHECK(agreement(a, from_mask(kD, {0, 1}), {}, OverlapMode::directional) == 50.0);
    CHECK(agreement(from_mask(kD, {0, 1}), a, {}, OverlapMode::directional) == 100.0);
    CHECK_THROWS_AS(agreement(Volume3::zeros(kD), Volume3::zeros(kD)), EmptyRelevanceError);
    CHECK_THROWS_AS(agreement(Volume3::zeros(kD), a, {}, OverlapMode::directional), EmptyRelevanceError);
}

TEST_CASE("metric properties on random volumes") {
    std::mt19937 rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const Dims3 d = oracle::random_dims(rng, 2, 6);
        const auto r = oracle::random_volume(rng, d, -1.0f, 1.0f);
        const auto s = oracle::random_volume(rng, d, -1.0f, 1.0f);
        const auto f = oracle::random_volume(rng, d, 0.0f, 0.05f);
        if (max_abs(r) == 0.0f) continue;
        try {
            const double p = motion_precision(r, f);
            CHECK(p >= 0.0);
            CHECK(p <= 100.0);
            for (float c : {0.5f, 8.0f}) CHECK(motion_precision(scaled(r, c), f) == p);
        } catch (const EmptyRelevanceError&) {
        }
        try {
            const double ab = agreement(r, s);
            CHECK(ab == agreement(s, r));
            CHECK(ab >= 0.0);
            CHECK(ab <= 100.0);
            CHECK(agreement(scaled(r, 4.0f), scaled(s, 0.25f)) == ab);
        } catch (const EmptyRelevanceError&) {
        }
        try {
            const auto self = selectivity_ratios(r, r);
            CHECK(self.area_pct == 100.0);
            CHECK(self.mass_pct == 100.0);
        } catch (const EmptyRelevanceError&) {
        }
    }
}

TEST_CASE("aggregate") {
    const auto a = aggregate({1.0, 3.0});
    CHECK(a.mean == 2.0);
    CHECK(a.std == 1.0);
    CHECK(a.count == 2);
    CHECK(aggregate({}).count == 0);
    CHECK(aggregate({5.0}).std == 0.0);
}

TEST_CASE("benchmark harness") {
    int calls = 0;
    const auto one = benchmark("x", [&] { ++calls; }, 1, 2);
    CHECK(calls == 3);
    CHECK(one.std_ms == 0.0);
    CHECK(one.repetitions == 1);
    CHECK(one.warmup == 2);

    const auto t = benchmark("sleep", [] { std::this_thread::sleep_for(std::chrono::microseconds(200)); }, 5, 0);
    CHECK(t.mean_ms >= t.min_ms);
    CHECK(t.max_ms >= t.mean_ms);
    CHECK(t.min_ms >= 0.2);
    CHECK_THROWS_AS(benchmark("bad", [] {}, 0), InputError);
}

TEST_CASE("report tables") {
    ReportTable t{"Precision", {"method", "avg", "std"}, {{"dtd", "27.7900", "1.0000"}, {"a,b", "1", "2"}}, {"agreement=iou"}};
    CHECK(to_csv(t) == "method,avg,std\ndtd,27.7900,1.0000\n\"a,b\",1,2\n");
    CHECK(to_text(t) ==
          "Precision\n"
          "method  avg      std\n"
          "dtd     27.7900  1.0000\n"
          "a,b     1        2\n"
          "# agreement=iou\n");
    CHECK(format_number(1.0 / 3.0) == "0.3333");
    CHECK(format_number(2.5, 1) == "2.5");
}
