#include <doctest.h>

#include <cmath>
#include <cstring>

#include "gradrec/engine.hpp"
#include "gradrec/signal.hpp"
#include "gradrec/transform.hpp"
#include "oracles.hpp"

using namespace gradrec;

namespace {

const std::vector<Component> kTwoTone = {{3.0, 10}, {1.0, 15}};

GradientConfig headline_config() {
    return GradientConfig{};  // d0=10, mu0=20, /10 every 20, 320 iterations
}

GradientConfig constant_config(double step, double gain, std::size_t iterations) {
    GradientConfig config;
    config.initial_step = step;
    config.initial_gain = gain;
    config.schedule.enabled = false;
    config.max_iterations = iterations;
    return config;
}

// Central difference of the measure recomputed with full transforms, the
// independent route the incremental gradient must agree with.
double full_recompute_gradient(const RealSignal& x, std::size_t index, double step) {
    std::vector<double> up(x.data());
    std::vector<double> down(x.data());
    up[index] += step;
    down[index] -= step;
    const double m_up = concentration_measure(forward(RealSignal(std::move(up))));
    const double m_down = concentration_measure(forward(RealSignal(std::move(down))));
    return (m_up - m_down) / (2.0 * step);
}

} // namespace

TEST_CASE("initialize keeps available samples and zeroes missing ones") {
    const RealSignal s = generate_test_signal(128, kTwoTone);

    const ReconstructionState no_missing = initialize(s, SamplingMask(128, {}), headline_config());
    CHECK(no_missing.x == s);
    CHECK(no_missing.iteration == 0);
    CHECK(no_missing.current_step == 10.0);
    CHECK(no_missing.current_gain == 20.0);

    std::vector<std::size_t> all(128);
    for (std::size_t i = 0; i < 128; ++i) all[i] = i;
    const ReconstructionState empty = initialize(s, SamplingMask(128, all), headline_config());
    for (double v : empty.x.samples()) CHECK(v == 0.0);

    const SamplingMask mask = random_mask(128, 64, 4);
    const ReconstructionState mixed = initialize(s, mask, headline_config());
    for (std::size_t i = 0; i < 128; ++i) {
        if (mask.is_missing(i)) {
            CHECK(mixed.x[i] == 0.0);
        } else {
            CHECK(mixed.x[i] == s[i]);
        }
    }

    CHECK_THROWS_AS(initialize(s, SamplingMask(64, {}), headline_config()),
                    std::invalid_argument);
}

TEST_CASE("config validation rejects bad knobs") {
    GradientConfig config;
    config.initial_step = 0.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = GradientConfig{};
    config.initial_gain = -1.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = GradientConfig{};
    config.max_iterations = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = GradientConfig{};
    config.schedule.decay_factor = 1.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.schedule.enabled = false;  // factor is ignored when disabled
    CHECK_NOTHROW(config.validate());
}

TEST_CASE("gradient entries are exactly zero at available indices") {
    const RealSignal s = generate_test_signal(128, kTwoTone);
    const SamplingMask mask = random_mask(128, 30, 9);
    const ReconstructionState state = initialize(s, mask, headline_config());
    const std::vector<double> gradient = estimate_gradient(state, mask, NormOrder(), 0.5);
    REQUIRE(gradient.size() == 128);
    for (std::size_t i = 0; i < 128; ++i) {
        if (!mask.is_missing(i)) CHECK(gradient[i] == 0.0);
    }
}

TEST_CASE("gradient is small at the optimum and points back toward it when displaced") {
    const RealSignal s = generate_test_signal(128, kTwoTone);
    const std::size_t missing = 37;
    const SamplingMask mask(128, {missing});
    const double step = 0.1;

    const auto gradient_at = [&](double displacement) {
        std::vector<double> x(s.data());
        x[missing] += displacement;
        const ReconstructionState state{RealSignal(std::move(x)), 0, step, 2.0 * step};
        return estimate_gradient(state, mask, NormOrder(), step)[missing];
    };

    // At the true value the estimate sits on the oscillation floor; ten
    // steps away it is near its saturation value.
    const double at_optimum = std::abs(gradient_at(0.0));
    const double displaced_up = std::abs(gradient_at(10.0 * step));
    const double displaced_down = std::abs(gradient_at(-10.0 * step));
    CHECK(at_optimum < 0.1 * displaced_up);
    CHECK(at_optimum < 0.1 * displaced_down);

    // Displaced by +2, the measure is increasing there, so the gradient is
    // positive and the update moves the sample back down.
    CHECK(gradient_at(2.0) > 0.0);

    // Brute-force sweep of the measure around the displacement confirms the
    // sign: the measure grows with distance from the optimum on that side.
    std::vector<double> x(s.data());
    x[missing] = 0.0;
    const ComplexSpectrum base = forward(RealSignal(std::move(x)));
    const double truth = s[missing];
    double previous = perturbed_measure(base, missing, truth + 0.5);
    for (int k = 2; k <= 5; ++k) {
        const double current = perturbed_measure(base, missing, truth + 0.5 * k);
        CHECK(current > previous);
        previous = current;
    }
}

TEST_CASE("incremental gradient agrees with full recomputation") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        const RealSignal x{oracles::random_samples(rng, 128, 4.0)};
        const SamplingMask mask = random_mask(128, 20, rng());
        const double step = 0.05 + 0.2 * trial;
        const ReconstructionState state{x, 0, step, step};
        const std::vector<double> gradient = estimate_gradient(state, mask, NormOrder(), step);
        for (std::size_t index : mask.missing()) {
            CHECK(std::abs(gradient[index] - full_recompute_gradient(x, index, step)) <= 1e-9);
        }
    }
}

TEST_CASE("apply_step updates missing samples only") {
    const RealSignal s = generate_test_signal(128, kTwoTone);
    const SamplingMask mask = random_mask(128, 64, 21);
    const ReconstructionState state = initialize(s, mask, headline_config());

    const std::vector<double> zero_gradient(128, 0.0);
    const ReconstructionState unchanged = apply_step(state, mask, zero_gradient, 2.0);
    CHECK(unchanged.x == state.x);
    CHECK(unchanged.iteration == 1);

    // E(n_k) = 1 with gain 2 lowers the sample by exactly 2.
    std::vector<double> unit_gradient(128, 0.0);
    const std::size_t target = mask.missing()[0];
    unit_gradient[target] = 1.0;
    const ReconstructionState stepped = apply_step(state, mask, unit_gradient, 2.0);
    CHECK(stepped.x[target] == state.x[target] - 2.0);

    // Available samples stay bit-identical.
    for (std::size_t i = 0; i < 128; ++i) {
        if (!mask.is_missing(i)) {
            CHECK(std::memcmp(&stepped.x.data()[i], &s.data()[i], sizeof(double)) == 0);
        }
    }

    std::vector<double> bad_gradient(128, 0.0);
    for (std::size_t i = 0; i < 128; ++i) {
        if (!mask.is_missing(i)) {
            bad_gradient[i] = 1.0;
            break;
        }
    }
    CHECK_THROWS_AS(apply_step(state, mask, bad_gradient, 2.0), std::invalid_argument);
}

TEST_CASE("one gradient step from the zero fill lowers the measure") {
    const RealSignal s = generate_test_signal(128, kTwoTone);
    const SamplingMask mask = random_mask(128, 94, 2);
    GradientConfig config;
    config.initial_step = 20.0;
    config.initial_gain = 40.0;
    const ReconstructionState state = initialize(s, mask, config);
    const double before = concentration_measure(forward(state.x));
    const std::vector<double> gradient =
        estimate_gradient(state, mask, config.order, state.current_step);
    const ReconstructionState next = apply_step(state, mask, gradient, state.current_gain);
    const double after = concentration_measure(forward(next.x));
    CHECK(after < before);
}

TEST_CASE("reconstruct with no missing samples returns the input") {
    const RealSignal s = generate_test_signal(128, kTwoTone);
    const ReconstructionResult result =
        reconstruct(s, SamplingMask(128, {}), headline_config(), &s);
    CHECK(result.signal == s);
    REQUIRE(result.trace.rows.size() == 321);  // initial row plus one per iteration
    for (const TraceRow& row : result.trace.rows) CHECK(row.mae.value() == 0.0);
    CHECK(result.trace.mae_min() == 0.0);
    CHECK(result.trace.iteration_of_mae_min() == 0);
}

TEST_CASE("headline run converges to the scaled tolerance") {
    const RealSignal s = generate_test_signal(128, kTwoTone);
    const SamplingMask mask = random_mask(128, 64, 1);
    const ReconstructionResult result = reconstruct(s, mask, headline_config(), &s);
    CHECK(result.trace.mae_min() <= 1e-12);
    CHECK(result.warnings.empty());
}

TEST_CASE("constant parameters plateau near 1e-2 and stop improving") {
    const RealSignal s = generate_test_signal(128, kTwoTone);
    const SamplingMask mask = random_mask(128, 64, 1);
    const ReconstructionResult result =
        reconstruct(s, mask, constant_config(0.5, 1.0, 500), &s);

    double min_by_50 = 1e300;
    for (std::size_t i = 1; i <= 50; ++i) {
        min_by_50 = std::min(min_by_50, result.trace.rows[i].mae.value());
    }
    CHECK(min_by_50 <= 0.05);
    CHECK(result.trace.mae_min() >= 1e-3);
}

TEST_CASE("trace schedule columns follow the staged decay exactly") {
    const RealSignal s = generate_test_signal(128, kTwoTone);
    const SamplingMask mask = random_mask(128, 8, 5);
    GradientConfig config;
    config.max_iterations = 90;
    const ReconstructionResult result = reconstruct(s, mask, config, &s);

    REQUIRE(result.trace.rows.size() == 91);
    for (const TraceRow& row : result.trace.rows) {
        double scale = 1.0;
        for (std::size_t stage = 0; stage < row.iteration / config.schedule.stage_length;
             ++stage) {
            scale *= config.schedule.decay_factor;
        }
        CHECK(row.step == config.initial_step / scale);
        CHECK(row.gain == config.initial_gain / scale);
        // dividing both by the same factor preserves the gain/step ratio
        CHECK(row.gain / row.step == config.initial_gain / config.initial_step);
    }

    // disabled schedule keeps both constant
    const ReconstructionResult constant =
        reconstruct(s, mask, constant_config(0.5, 1.0, 40), &s);
    for (const TraceRow& row : constant.trace.rows) {
        CHECK(row.step == 0.5);
        CHECK(row.gain == 1.0);
    }
}

TEST_CASE("reconstruction is deterministic") {
    const RealSignal s = generate_test_signal(128, kTwoTone);
    const SamplingMask mask = random_mask(128, 64, 6);
    const ReconstructionResult a = reconstruct(s, mask, headline_config(), &s);
    const ReconstructionResult b = reconstruct(s, mask, headline_config(), &s);
    REQUIRE(a.trace.rows.size() == b.trace.rows.size());
    CHECK(std::memcmp(a.signal.data().data(), b.signal.data().data(),
                      a.signal.size() * sizeof(double)) == 0);
    for (std::size_t i = 0; i < a.trace.rows.size(); ++i) {
        CHECK(std::memcmp(&a.trace.rows[i].measure, &b.trace.rows[i].measure,
                          sizeof(double)) == 0);
        CHECK(a.trace.rows[i].mae.value() == b.trace.rows[i].mae.value());
    }
}

TEST_CASE("per-stage measure minima do not increase for the headline run") {
    const RealSignal s = generate_test_signal(128, kTwoTone);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const SamplingMask mask = random_mask(128, 64, seed);
        const ReconstructionResult result = reconstruct(s, mask, headline_config(), &s);
        double previous_stage_min = 1e300;
        for (std::size_t stage = 0; stage < 16; ++stage) {
            double stage_min = 1e300;
            for (std::size_t i = 1 + 20 * stage; i <= 20 * (stage + 1); ++i) {
                stage_min = std::min(stage_min, result.trace.rows[i].measure);
            }
            CHECK(stage_min <= previous_stage_min * (1.0 + 1e-12));
            previous_stage_min = stage_min;
        }
        // and the run makes actual progress from the zero fill
        CHECK(previous_stage_min < result.trace.rows[0].measure);
    }
}

TEST_CASE("available samples stay bit-identical through a manual loop") {
    const RealSignal s = generate_test_signal(128, kTwoTone);
    const SamplingMask mask = random_mask(128, 64, 8);
    GradientConfig config = headline_config();
    ReconstructionState state = initialize(s, mask, config);
    for (std::size_t iteration = 1; iteration <= 25; ++iteration) {
        const auto gradient = estimate_gradient(state, mask, config.order, state.current_step);
        state = apply_step(state, mask, gradient, state.current_gain);
        const double scale = config.schedule.scale_at(state.iteration);
        state.current_step = config.initial_step / scale;
        state.current_gain = config.initial_gain / scale;
        for (std::size_t i = 0; i < 128; ++i) {
            if (!mask.is_missing(i)) {
                CHECK(std::memcmp(&state.x.data()[i], &s.data()[i], sizeof(double)) == 0);
            }
        }
    }
}

TEST_CASE("a degenerate all-missing mask reconstructs with a warning") {
    const RealSignal s = generate_test_signal(128, kTwoTone);
    std::vector<std::size_t> all(128);
    for (std::size_t i = 0; i < 128; ++i) all[i] = i;
    GradientConfig config = headline_config();
    config.max_iterations = 40;
    const ReconstructionResult result = reconstruct(s, SamplingMask(128, all), config, &s);
    CHECK_FALSE(result.warnings.empty());
    for (double v : result.signal.samples()) CHECK(std::isfinite(v));
}

TEST_CASE("a schedule that underflows the step aborts with the iteration named") {
    const RealSignal s = generate_test_signal(128, kTwoTone);
    const SamplingMask mask = random_mask(128, 16, 3);
    GradientConfig config;
    config.initial_step = 1e-300;
    config.initial_gain = 2e-300;
    config.schedule.stage_length = 1;
    config.schedule.decay_factor = 1e10;
    config.max_iterations = 60;
    CHECK_THROWS_WITH_AS(reconstruct(s, mask, config, &s),
                         doctest::Contains("underflowed to zero before iteration"),
                         std::runtime_error);

    // the optional early stop makes the same schedule finish cleanly
    config.stop_step_threshold = 1e-280;
    const ReconstructionResult result = reconstruct(s, mask, config, &s);
    CHECK(result.trace.rows.size() < 61);
}

TEST_CASE("a run whose iterate blows up aborts instead of diverging silently") {
    const RealSignal s = generate_test_signal(128, kTwoTone);
    const SamplingMask mask = random_mask(128, 16, 3);
    GradientConfig config;
    config.initial_gain = 1e308;  // the first update throws the iterate to ~1e307,
    config.schedule.enabled = false;
    config.max_iterations = 5;  // ...whose transform then overflows to inf
    CHECK_THROWS_WITH_AS(reconstruct(s, mask, config, &s), doctest::Contains("non-finite"),
                         std::runtime_error);
}

TEST_CASE("brute-force scan finds the measure-minimizing sample value") {
    const RealSignal zero(std::vector<double>(128, 0.0));
    const SamplingMask one_missing(128, {17});
    CHECK(std::abs(brute_force_single_sample(zero, one_missing, NormOrder(), 5.0, 0.01)) <= 0.01);

    const RealSignal s = generate_test_signal(128, kTwoTone);
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t index = rng() % 128;
        const SamplingMask mask(128, {index});
        const double found = brute_force_single_sample(s, mask, NormOrder(), 5.0, 0.01);
        CHECK(std::abs(found - s[index]) <= 0.011);

        // the returned value is no worse than the truth rounded to the grid
        std::vector<double> x(s.data());
        x[index] = 0.0;
        const ComplexSpectrum base = forward(RealSignal(std::move(x)));
        const double at_found = perturbed_measure(base, index, found);
        CHECK(at_found <= perturbed_measure(base, index, s[index] + 0.01));
        CHECK(at_found <= perturbed_measure(base, index, s[index] - 0.01));
    }

    CHECK_THROWS_AS(brute_force_single_sample(s, random_mask(128, 2, 1), NormOrder(), 5.0, 0.01),
                    std::invalid_argument);
}

TEST_CASE("gradient engine agrees with the brute-force oracle on one missing sample") {
    const RealSignal s = generate_test_signal(128, kTwoTone);
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 5; ++trial) {
        const SamplingMask mask = random_mask(128, 1, rng());
        const double oracle = brute_force_single_sample(s, mask, NormOrder(), 5.0, 0.01);
        const ReconstructionResult result = reconstruct(s, mask, headline_config(), &s);
        CHECK(std::abs(result.signal[mask.missing()[0]] - oracle) <= 0.1);
    }
}
