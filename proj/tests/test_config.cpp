#include <doctest.h>

#include "vhj/config.hpp"
#include "vhj/report.hpp"

using namespace vhj;

namespace {

const char* kMinimalStationary = R"(
# minimal stationary experiment
mode = stationary
domain.kind = interval
domain.min = -1
domain.max = 1
grid.resolution = 50
problem.m = 2
problem.delta = 1
)";

}  // namespace

TEST_CASE("minimal config parses with documented defaults") {
    ExperimentConfig cfg = parse_config(kMinimalStationary);
    CHECK(cfg.mode == RunMode::Stationary);
    CHECK(cfg.tol == doctest::Approx(-1.0));  // auto: 1e-8 (1 + sup|f|)
    CHECK(cfg.budget == 1000000);
    CHECK(cfg.resolution == doctest::Approx(50.0));
    CHECK(cfg.problem.delta == doctest::Approx(1.0));
    CHECK(cfg.problem.domain.kind() == DomainKind::Interval);
}

TEST_CASE("growth exponent below one is a range error") {
    std::string text(kMinimalStationary);
    size_t pos = text.find("problem.m = 2");
    text.replace(pos, 13, "problem.m = 0.5");
    CHECK_THROWS_AS(parse_config(text), ConfigError);
}

TEST_CASE("duplicate keys are rejected with line context") {
    std::string text(kMinimalStationary);
    text += "problem.m = 3\n";
    try {
        parse_config(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("duplicate key 'problem.m'") != std::string::npos);
        CHECK(msg.find("line") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected") {
    std::string text(kMinimalStationary);
    text += "problme.delta = 1\n";
    CHECK_THROWS_AS(parse_config(text), ConfigError);
}

TEST_CASE("resolution floor and geometry checks") {
    std::string text(kMinimalStationary);
    size_t pos = text.find("grid.resolution = 50");
    text.replace(pos, 20, "grid.resolution = 4 ");
    CHECK_THROWS_AS(parse_config(text), ConfigError);
}

TEST_CASE("metric config round trip") {
    const char* metric_cfg = R"(
mode = metric
domain.kind = annulus
domain.outer_kind = interval
domain.min = -3
domain.max = 3
domain.target_center = 0
domain.target_radius = 1
grid.resolution = 100
problem.m = 2
metric.mu = 1, 2.5, 4
)";
    ExperimentConfig cfg = parse_config(metric_cfg);
    CHECK(cfg.mode == RunMode::Metric);
    CHECK(cfg.problem.domain.kind() == DomainKind::Annulus);
    REQUIRE(cfg.mu_list.size() == 3);
    CHECK(cfg.mu_list[1] == doctest::Approx(2.5));
}

TEST_CASE("metric mode without an annulus is rejected") {
    std::string text(kMinimalStationary);
    size_t pos = text.find("mode = stationary");
    text.replace(pos, 17, "mode = metric    ");
    text += "metric.mu = 1\n";
    CHECK_THROWS_AS(parse_config(text), ConfigError);
}

TEST_CASE("field definitions parse across forms") {
    const char* cfg_text = R"(
mode = stationary
domain.kind = interval
domain.min = -2
domain.max = 2
grid.resolution = 50
problem.m = 1.5
problem.delta = 1
problem.b.form = trig
problem.b.c0 = 1.5
problem.b.amp = 0.4
problem.b.freq = 1
problem.f.form = log_affine
problem.f.c1 = -2
problem.f.shift = 3.5
problem.f.k = 1
problem.sigma.kind = scalar
problem.sigma.s.form = ramp_abs
problem.sigma.s.cap = 1
problem.sigma.s.slope = 1
)";
    ExperimentConfig cfg = parse_config(cfg_text);
    CHECK(cfg.problem.hamiltonian.b({0.0, 0.0}, 1) == doctest::Approx(1.9));
    CHECK(!cfg.problem.diffusion.is_zero());

    // field sub-keys are validated too
    std::string broken(cfg_text);
    broken += "problem.b.ampp = 2\n";
    CHECK_THROWS_AS(parse_config(broken), ConfigError);
}

TEST_CASE("config digest is stable under reordering") {
    ExperimentConfig a = parse_config(kMinimalStationary);
    const char* reordered = R"(
problem.delta = 1
problem.m = 2
grid.resolution = 50
domain.max = 1
domain.min = -1
domain.kind = interval
mode = stationary
)";
    ExperimentConfig b = parse_config(reordered);
    CHECK(canonical_digest(a.raw) == canonical_digest(b.raw));

    std::string changed(kMinimalStationary);
    size_t pos = changed.find("problem.delta = 1");
    changed.replace(pos, 17, "problem.delta = 2");
    ExperimentConfig c = parse_config(changed);
    CHECK(canonical_digest(a.raw) != canonical_digest(c.raw));
}

TEST_CASE("sweep config requires its three keys") {
    std::string text(kMinimalStationary);
    size_t pos = text.find("mode = stationary");
    text.replace(pos, 17, "mode = sweep     ");
    CHECK_THROWS_AS(parse_config(text), ConfigError);
    text += "sweep.param = problem.delta\nsweep.values = 1,2\nsweep.mode = stationary\n";
    ExperimentConfig cfg = parse_config(text);
    CHECK(cfg.sweep_values.size() == 2);
}
