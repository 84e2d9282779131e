#include "doctest.h"
#include "g2kit/verify.hpp"

using namespace g2kit;

namespace {

VerificationReport run(std::size_t samples, std::uint64_t seed = 1, AlternatingForm phi = phi0()) {
    VerifyConfig c;
    c.samples = samples;
    c.seed = seed;
    c.phi = phi;
    return run_verify(c);
}

const Check* find(const VerificationReport& r, const std::string& name) {
    for (const Check& c : r.checks)
        if (c.name == name) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("default verification passes") {
    const VerificationReport r = run(2000);
    for (const Check& c : r.checks) {
        CAPTURE(c.name);
        CHECK(c.pass);
        CHECK(c.pass == (c.max_error <= c.threshold));
        CHECK(!c.ref.empty());
    }
    CHECK(r.pass());
    CHECK(r.wall_time < 0);
    CHECK(r.checks.size() > 30);
}

TEST_CASE("small and large sample counts agree on pass/fail") {
    const VerificationReport a = run(10), b = run(20000);
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].name == b.checks[i].name);
        CHECK(a.checks[i].pass == b.checks[i].pass);
    }
}

TEST_CASE("verification is deterministic per seed") {
    const VerificationReport a = run(500, 7), b = run(500, 7), c = run(500, 8);
    bool differs = false;
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].max_error == b.checks[i].max_error);
        differs = differs || a.checks[i].max_error != c.checks[i].max_error;
    }
    CHECK(differs);
}

TEST_CASE("a corrupted phi coefficient fails the associator check") {
    AlternatingForm bad = phi0();
    bad.set({1, 2, 3}, 1.05);
    const VerificationReport r = run(200, 1, bad);
    CHECK_FALSE(r.pass());
    REQUIRE(find(r, "associator.chi") != nullptr);
    CHECK_FALSE(find(r, "associator.chi")->pass);
    CHECK_FALSE(find(r, "associator.octonion")->pass);
    CHECK_FALSE(find(r, "chi.dual_path")->pass);
    // Suites that do not depend on phi are unaffected.
    CHECK(find(r, "octonion.alternative")->pass);
    CHECK(find(r, "dirac.kernel")->pass);
}

TEST_CASE("a non-positive form fails without throwing") {
    AlternatingForm bad(3, 7);
    bad.set({1, 2, 3}, 1.0);
    const VerificationReport r = run(50, 1, bad);
    CHECK_FALSE(r.pass());
    CHECK_FALSE(find(r, "phi.metric")->pass);
}

TEST_CASE("timing and sample validation") {
    VerifyConfig c;
    c.samples = 20;
    c.timing = true;
    CHECK(run_verify(c).wall_time >= 0);
    c.samples = 0;
    CHECK_THROWS_AS(run_verify(c), std::invalid_argument);
}
