#include <doctest.h>

#include <cmath>
#include <vector>

#include "kompakton/errors.hpp"
#include "kompakton/radiation.hpp"

using namespace kompakton;

namespace {

SideProfile make_profile(std::vector<double> magnitudes, double centre = 0.0) {
    SideProfile p{WavepacketSide::Forward, centre, {}, std::move(magnitudes)};
    // outer end first, positions decreasing toward the compacton at 0
    for (std::size_t i = 0; i < p.magnitudes.size(); ++i) {
        p.positions.push_back(static_cast<double>(p.magnitudes.size() - i));
    }
    return p;
}

// Compacton at rest at x0 = 100 with flat radiation plateaus on both sides:
// amplitude a t^-rho, fronts moving at vf and vb from the compacton edges.
std::vector<FieldState> plateau_run(const CompactonSpec& spec, const GridSpec& grid, double rho,
                                    double vf, double vb) {
    std::vector<FieldState> out;
    // plateaus start right at the support edges so every profile node is covered
    const double right = spec.x0() + spec.half_width();
    const double left = spec.x0() - spec.half_width();
    for (double t = 10.0; t <= 100.0 + 1e-9; t += 5.0) {
        FieldState f = sample_initial(spec, grid);
        f.t = t;
        const double a = 1e-4 * std::pow(t, -rho);
        for (std::size_t m = 0; m < grid.nodes(); ++m) {
            const double x = grid.x(m);
            if (x > right && x < right + vf * t) f.values[m] += a;
            if (x < left && x > left + vb * t) f.values[m] -= 2.0 * a;
        }
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace

TEST_CASE("five point maximum") {
    // gaussian bump on 11 nodes
    std::vector<double> v;
    for (int i = 0; i < 11; ++i) v.push_back(std::exp(-0.5 * (i - 5) * (i - 5)));
    const auto amp = detect_amplitude(make_profile(v));
    REQUIRE(amp.has_value());
    CHECK(*amp == doctest::Approx(1.0));

    CHECK_FALSE(detect_amplitude(make_profile(std::vector<double>(11, 0.0))).has_value());
    CHECK_FALSE(detect_amplitude(make_profile({1, 2, 3, 4, 5, 6, 7})).has_value());
    CHECK_FALSE(detect_amplitude(make_profile({1, 2, 3})).has_value());

    // The scan starts at the noise floor: a tiny ripple at the outer end is skipped.
    std::vector<double> noisy{1e-9, 2e-9, 3e-9, 2e-9, 1e-9, 0.1, 0.2, 0.5, 0.3, 0.2, 0.1};
    CHECK(*detect_amplitude(make_profile(noisy)) == doctest::Approx(0.5));
}

TEST_CASE("front position interpolates") {
    const SideProfile p = make_profile({0.0, 0.0, 0.2, 1.0, 1.0});
    // positions 5, 4, 3, 2, 1; 0.5 reached between 3 (0.2) and 2 (1.0)
    const auto front = front_position(p, 0.5);
    REQUIRE(front.has_value());
    CHECK(*front == doctest::Approx(3.0 - 0.3 / 0.8));
    CHECK_FALSE(front_position(p, 2.0).has_value());
    CHECK(*front_position(make_profile({1.0, 0.0}), 0.5) == 2.0);
    CHECK_THROWS_AS((void)front_position(p, 0.0), ParameterError);
}

TEST_CASE("mean envelope") {
    const SideProfile p = make_profile({0.0, 0.0, 2.0, 2.0, 2.0});
    CHECK(*mean_envelope_amplitude(p, 3.5) == doctest::Approx(2.0));
    const SideProfile z = make_profile({0.0, 0.0, 0.0, 0.0});
    CHECK(*mean_envelope_amplitude(z, 2.5) == 0.0);
    CHECK_FALSE(mean_envelope_amplitude(p, 0.5).has_value());
}

TEST_CASE("containment") {
    AnalysisSettings s;
    s.guard_nodes = 2;
    CHECK(packet_contained(make_profile({0.0, 0.0, 1.0, 1.0}), s));
    CHECK_FALSE(packet_contained(make_profile({0.0, 0.01, 1.0, 1.0}), s));
    CHECK(packet_contained(make_profile({0.0, 1e-4, 1.0, 1.0}), s));
    CHECK(packet_contained(make_profile({0.0, 0.0, 0.0}), s));
}

TEST_CASE("settings validation") {
    AnalysisSettings s;
    s.forward_share = 1.0;
    CHECK_THROWS_AS(s.validate(), ParameterError);
    const auto d = default_analysis_settings(SchemeId::Pade6);
    CHECK(d.forward_share > 0.8);
    CHECK(d.forward_share < 1.0);
}

TEST_CASE("side profiles stay outside the compacton") {
    const CompactonSpec spec(Rational(2), 1.0, 100.0, 1.0);
    const GridSpec grid(400.0, 4000);
    const FieldState f = sample_initial(spec, grid);
    for (WavepacketSide side : {WavepacketSide::Forward, WavepacketSide::Backward}) {
        const SideProfile p = side_profile(f, side, spec, grid);
        CHECK(p.max_magnitude() == 0.0);
        CHECK(p.positions.size() > 1000);
    }
    const SideProfile fwd = side_profile(f, WavepacketSide::Forward, spec, grid);
    CHECK(fwd.positions.back() > 100.0 + spec.half_width());
    CHECK(fwd.positions.front() > fwd.positions.back());
    const SideProfile bwd = side_profile(f, WavepacketSide::Backward, spec, grid);
    CHECK(bwd.positions.back() < 100.0 - spec.half_width());
    CHECK(bwd.positions.front() < 0.0);  // wraps past x = 0
    CHECK_THROWS_AS((void)side_profile(FieldState{0.0, {1.0}}, WavepacketSide::Forward, spec, grid),
                    ParameterError);
}

TEST_CASE("synthetic plateaus give back velocity and rho") {
    const CompactonSpec spec(Rational(2), 1.0, 100.0, 1.0);
    const GridSpec grid(400.0, 4000);
    const auto snaps = plateau_run(spec, grid, 0.5, 1.5, -0.8);
    const RadiationReport r = analyze(snaps, spec, grid);
    CHECK(r.times.size() == snaps.size());

    REQUIRE(r.forward.velocity.has_value());
    CHECK(r.forward.velocity->slope == doctest::Approx(1.5).epsilon(1e-3));
    REQUIRE(r.forward.scaling.has_value());
    CHECK(r.forward.scaling->slope == doctest::Approx(0.5).epsilon(1e-6));
    CHECK_FALSE(r.forward.contained_until.has_value());

    REQUIRE(r.backward.velocity.has_value());
    CHECK(r.backward.velocity->slope == doctest::Approx(-0.8).epsilon(1e-3));
    REQUIRE(r.backward.scaling.has_value());
    CHECK(r.backward.scaling->slope == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("a packet reaching the outer end stops the measurement") {
    const CompactonSpec spec(Rational(2), 1.0, 100.0, 1.0);
    const GridSpec grid(400.0, 4000);
    // forward plateau at speed 3 crosses its region (about 190 long) near t = 63
    const auto snaps = plateau_run(spec, grid, 0.5, 3.0, -1.0);
    const RadiationReport r = analyze(snaps, spec, grid);
    REQUIRE(r.forward.contained_until.has_value());
    CHECK(*r.forward.contained_until > 55.0);
    CHECK(*r.forward.contained_until < 75.0);
    CHECK_FALSE(r.forward.fronts.back().has_value());
    REQUIRE(r.forward.velocity.has_value());
    CHECK(r.forward.velocity->slope == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(r.forward.velocity_note.find("outer end") != std::string::npos);
}

TEST_CASE("no radiation gives empty measurements") {
    const CompactonSpec spec(Rational(2), 1.0, 100.0, 1.0);
    const GridSpec grid(400.0, 400);
    std::vector<FieldState> snaps;
    for (double t : {0.0, 5.0, 10.0}) {
        FieldState f = sample_initial(spec, grid);
        f.t = t;
        snaps.push_back(f);
    }
    const RadiationReport r = analyze(snaps, spec, grid);
    CHECK_FALSE(r.forward.threshold.has_value());
    CHECK_FALSE(r.forward.velocity.has_value());
    CHECK_FALSE(r.backward.scaling.has_value());
    CHECK_FALSE(r.forward.velocity_note.empty());
}
