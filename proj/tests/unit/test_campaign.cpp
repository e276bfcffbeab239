#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>

#include "kompakton/campaign.hpp"
#include "kompakton/errors.hpp"

using namespace kompakton;

namespace {

ExperimentConfig base_config(const std::string& extra = "") {
    return parse_config("scheme = de_frutos\np = 2\nc = 1\nL = 100\ndx = 0.1\ndt = 0.05\nt_end = 1\n" +
                        extra);
}

struct ThreadsEnv {
    explicit ThreadsEnv(const char* value) { ::setenv("KOMPAKTON_THREADS", value, 1); }
    ~ThreadsEnv() { ::unsetenv("KOMPAKTON_THREADS"); }
};

}  // namespace

TEST_CASE("table names") {
    for (TableId t : kAllTables) CHECK(parse_table(table_name(t)) == t);
    CHECK_THROWS_AS((void)parse_table("amplitudes"), ParameterError);
}

TEST_CASE("sweep sizes per table") {
    const ExperimentConfig one = base_config();
    const ExperimentConfig all = base_config("table_schemes = all\n");
    const std::size_t per_scheme[] = {5, 5, 9, 5, 7};
    std::size_t i = 0;
    for (TableId t : kAllTables) {
        std::vector<std::string> columns;
        CHECK(campaign_points(t, one, &columns).size() == per_scheme[i]);
        CHECK(columns.size() == per_scheme[i]);
        CHECK(campaign_points(t, all).size() == 4 * per_scheme[i]);
        ++i;
    }
    std::vector<std::string> columns;
    const auto points = campaign_points(TableId::AmplitudesDx, one, &columns);
    CHECK(columns.front() == "0.2");
    CHECK(points.back().dx == doctest::Approx(0.0125));
    CHECK(points.back().t_end == 150.0);
    const auto fronts = campaign_points(TableId::FrontVelocities, one, &columns);
    CHECK(columns.front() == "dx=0.1 dt=0.025 c0=0.5");
    CHECK(fronts.front().c == 1.0);
    CHECK(fronts.front().c0 == 0.5);
    CHECK(campaign_points(TableId::ScalingDx, one).front().t_end == 300.0);
    const auto scaling_c = campaign_points(TableId::ScalingC, one);
    CHECK(scaling_c.front().c == doctest::Approx(0.1));
    CHECK(scaling_c.back().c0 == doctest::Approx(5.0));
}

TEST_CASE("point config") {
    const ExperimentConfig base = base_config("x0 = 30\n");
    const auto points = campaign_points(TableId::AmplitudesDt, base);
    const ExperimentConfig cfg = point_config(base, points[1]);
    CHECK(cfg.dt == points[1].dt);
    CHECK(cfg.dx() == doctest::Approx(0.05));
    CHECK(cfg.x0 == 30.0);
    CHECK(cfg.t_end == 150.0);
}

TEST_CASE("cells") {
    CHECK(CampaignCell::number(0.25).to_string() == "0.25");
    CHECK(CampaignCell::blowup().to_string() == "blowup");
    CHECK(CampaignCell::not_detected().to_string() == "nd");
    CHECK(CampaignCell::number(std::nan("")).to_string() == "nd");
}

TEST_CASE("thread count") {
    {
        ThreadsEnv env("3");
        CHECK(campaign_threads(10) == 3);
        CHECK(campaign_threads(2) == 2);
    }
    {
        ThreadsEnv env("zero");
        CHECK_THROWS_AS((void)campaign_threads(4), ParameterError);
    }
    {
        ThreadsEnv env("0");
        CHECK_THROWS_AS((void)campaign_threads(4), ParameterError);
    }
    CHECK(campaign_threads(1) == 1);
    CHECK(campaign_threads(0) == 1);
}

TEST_CASE("evaluating a short run") {
    ExperimentConfig cfg = base_config("c0 = 0.5\nx0 = 50\nsnapshot_interval = 0.25\n");
    const PointOutcome out = evaluate_point(TableId::AmplitudesDx, cfg);
    CHECK(out.status == RunStatus::Completed);

    // a Newton cap that can never be met ends the run like a blow-up
    cfg.newton_max_iters = 1;
    cfg.newton_abs_tol = 1e-300;
    const PointOutcome blown = evaluate_point(TableId::AmplitudesDx, cfg);
    CHECK(blown.status == RunStatus::BlownUp);
    CHECK(blown.cells[0].kind == CampaignCell::Kind::Blowup);
    CHECK(blown.cells[1].kind == CampaignCell::Kind::Blowup);
    CHECK_FALSE(blown.note.empty());
}

TEST_CASE("formatted tables mark blow-ups") {
    CampaignResult r;
    r.table = TableId::AmplitudesDx;
    r.columns = {"0.2", "0.1"};
    r.quantities = {"u_f", "u_b"};
    r.fit_label = "q";
    const ExperimentConfig base = base_config();
    r.points = campaign_points(TableId::AmplitudesDx, base);
    r.points.resize(2);
    r.outcomes.resize(2);
    r.outcomes[0].cells = {CampaignCell::number(1e-6), CampaignCell::number(2e-6)};
    r.outcomes[1].status = RunStatus::BlownUp;
    r.outcomes[1].cells = {CampaignCell::blowup(), CampaignCell::blowup()};
    r.fits.push_back({SchemeId::DeFrutos, "u_f", std::nullopt});
    r.fits.push_back({SchemeId::DeFrutos, "u_b", std::nullopt});
    const std::string table = format_campaign_table(r);
    CHECK(table.rfind("method,quantity,0.2,0.1,q\n", 0) == 0);
    CHECK(table.find("de_frutos,u_f,9.9999999999999995e-07,blowup,nd") != std::string::npos);
    const std::string longform = format_campaign_long(r);
    CHECK(longform.find("blowup") != std::string::npos);
}
