#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "secrescope/errors.hpp"
#include "secrescope/harness.hpp"

using namespace secrescope;

namespace {

const char* kFig2a = R"(# two-hop multicast, scenario 1
[system]
scenario = 1
K = 4
M = 2
N = 2
target_rate_bits = 0.5

[first_hop]
mu = 0.5
eta = 0.5
phi_db = 10

[multicast_hop]
mu = 0.5
eta = 0.5
m = 5
phi_db = 10

[eaves_hop]
mu = 0.5
eta = 0.5
m = 5
phi_db = 5
)";

std::string error_of(const std::string& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    auto p = s.find(from);
    EXPECT_NE(p, std::string::npos) << from;
    return s.replace(p, from.size(), to);
}

SweepSpec small_sweep() {
    SweepSpec s = parse_config(kFig2a);
    s.engines = {Engine::ClosedForm, Engine::MonteCarlo};
    s.plan.trials = 20000;
    return s;
}

}  // namespace

TEST(Config, MinimalDocument) {
    SweepSpec s = parse_config(kFig2a);
    EXPECT_EQ(s.base.scenario, 1);
    EXPECT_EQ(s.base.K, 4);
    EXPECT_EQ(s.base.M, 2);
    EXPECT_EQ(s.base.N, 2);
    EXPECT_EQ(s.base.first_hop.family(), Family::EtaMu);
    EXPECT_EQ(s.base.multicast_hop.family(), Family::EtaMuIG);
    EXPECT_DOUBLE_EQ(s.base.multicast_hop.mu(), 0.5);
    EXPECT_DOUBLE_EQ(s.base.multicast_hop.m(), 5.0);
    EXPECT_NEAR(s.base.eaves_hop.phi(), std::pow(10.0, 0.5), 1e-12);
    EXPECT_DOUBLE_EQ(s.base.target_rate, 0.5);
    EXPECT_EQ(s.values_db.size(), 9u);
    EXPECT_EQ(s.axis, "phi_m_db");
}

TEST(Config, EtaOutOfRange) {
    std::string doc = replace(kFig2a, "[first_hop]\nmu = 0.5\neta = 0.5", "[first_hop]\nmu = 0.5\neta = 1.5");
    EXPECT_EQ(error_of(doc), "[first_hop] eta must lie in (-1, 1)");
}

TEST(Config, MissingSection) {
    std::string doc = kFig2a;
    doc = doc.substr(0, doc.find("[eaves_hop]"));
    EXPECT_EQ(error_of(doc), "missing section [eaves_hop]");
}

TEST(Config, LineNumberedErrors) {
    EXPECT_EQ(error_of(replace(kFig2a, "K = 4", "K = four")), "line 4: 'K' expects a number, got 'four'");
    EXPECT_EQ(error_of(replace(kFig2a, "K = 4", "L = 4")), "line 4: unknown key 'L' in [system]");
    EXPECT_EQ(error_of(replace(kFig2a, "[first_hop]\nmu = 0.5", "[first_hop]\nmu = 0.5\nkappa = 1")),
              "line 11: 'kappa' does not apply to family eta_mu");
    EXPECT_EQ(error_of(std::string(kFig2a) + "[bogus]\n"), "line 25: unknown section [bogus]");
}

TEST(Config, SweepSection) {
    std::string doc = std::string(kFig2a) +
                      "[sweep]\naxis = phi_t_db\nvalues_db = 0:5:20\nmetrics = sopm, esmc\n"
                      "engines = closed_form, monte_carlo\nseries_terms = 40\n"
                      "[simulation]\ntrials = 5000\nseed = 9\nmode = shared_source\n";
    SweepSpec s = parse_config(doc);
    EXPECT_EQ(s.axis, "phi_t_db");
    EXPECT_EQ(s.values_db, (std::vector<double>{0, 5, 10, 15, 20}));
    EXPECT_EQ(s.metrics.size(), 2u);
    EXPECT_EQ(s.engines[1], Engine::MonteCarlo);
    EXPECT_EQ(s.trunc.series_terms, 40);
    EXPECT_EQ(s.plan.trials, 5000);
    EXPECT_EQ(s.plan.mode, SimMode::SharedSource);
}

TEST(Config, GridParsing) {
    EXPECT_EQ(parse_grid("0, 2.5, 7"), (std::vector<double>{0, 2.5, 7}));
    EXPECT_EQ(parse_grid("0:2.5:20").size(), 9u);
    EXPECT_THROW(parse_grid("0:-1:5"), ConfigError);
}

TEST(Config, AxisApplication) {
    SystemConfig base = parse_config(kFig2a).base;
    auto tied = apply_axis(base, "phi_m_db", 20.0, true);
    EXPECT_NEAR(tied.multicast_hop.phi(), 100.0, 1e-9);
    EXPECT_NEAR(tied.first_hop.phi(), 100.0, 1e-9);
    auto untied = apply_axis(base, "phi_m_db", 20.0, false);
    EXPECT_NEAR(untied.first_hop.phi(), 10.0, 1e-9);
    EXPECT_NEAR(apply_axis(base, "phi_t_db", 0.0, true).eaves_hop.phi(), 1.0, 1e-12);
    EXPECT_FALSE(is_axis("phi_x_db"));
}

TEST(Presets, Fig2a) {
    SweepSpec s = figure_preset("fig2a");
    ASSERT_EQ(s.variants.size(), 6u);
    for (const auto& v : s.variants) {
        EXPECT_EQ(v.sys.K, 4);
        EXPECT_EQ(v.sys.M, 2);
        EXPECT_EQ(v.sys.N, 2);
        EXPECT_DOUBLE_EQ(v.sys.multicast_hop.m(), 5.0);
        EXPECT_DOUBLE_EQ(v.sys.first_hop.mu(), 0.5);
        EXPECT_EQ(v.sys.first_hop.family(), Family::EtaMu);
    }
    std::set<double> rates;
    for (const auto& v : s.variants) rates.insert(v.sys.target_rate);
    EXPECT_EQ(rates, (std::set<double>{0.5, 1.0, 2.0}));
}

TEST(Presets, Fig8b) {
    SweepSpec s = figure_preset("fig8b");
    for (const auto& v : s.variants) {
        EXPECT_EQ(v.sys.scenario, 2);
        EXPECT_EQ(v.sys.N, 2);
        EXPECT_EQ(v.sys.K, 4);
        EXPECT_DOUBLE_EQ(v.sys.multicast_hop.m(), 5.0);
        EXPECT_DOUBLE_EQ(v.sys.multicast_hop.mu(), 2.0);
        EXPECT_DOUBLE_EQ(std::get<KappaMuIGParams>(v.sys.multicast_hop.params).kappa, 0.5);
        EXPECT_DOUBLE_EQ(v.sys.target_rate, 0.5);
    }
    EXPECT_EQ(s.metrics, std::vector<Metric>{Metric::Esmc});
}

TEST(Presets, UnknownName) {
    try {
        figure_preset("fig99");
        FAIL() << "no error";
    } catch (const ConfigError& e) {
        std::string m = e.what();
        EXPECT_NE(m.find("fig99"), std::string::npos);
        EXPECT_NE(m.find("fig2a"), std::string::npos);
        EXPECT_NE(m.find("fig10b"), std::string::npos);
    }
}

TEST(Presets, AllNamesBuild) {
    EXPECT_EQ(figure_names().size(), 18u);
    for (const auto& n : figure_names()) EXPECT_NO_THROW(figure_preset(n).validate()) << n;
}

TEST(Sweep, CardinalityAndEngineContract) {
    SweepSpec s = small_sweep();
    auto t0 = std::chrono::steady_clock::now();
    auto rows = run_sweep(s);
    double wall = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    ASSERT_EQ(rows.size(), 18u);
    double sum = 0;
    for (const auto& r : rows) {
        EXPECT_TRUE(r.error.empty()) << r.error;
        EXPECT_GT(r.runtime_ms, 0.0);
        sum += r.runtime_ms;
        if (r.engine == "monte_carlo")
            EXPECT_GT(r.std_error, 0.0);
        else
            EXPECT_EQ(r.std_error, 0.0);
    }
    EXPECT_LE(sum, 2.0 * wall);
    EXPECT_GE(sum, 0.5 * wall);
    // axis-major order
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(rows[i].axis_value_db, rows[i - 1].axis_value_db);
}

TEST(Sweep, SameSeedSameRows) {
    SweepSpec s = small_sweep();
    s.values_db = {5.0, 10.0};
    s.engines = {Engine::MonteCarlo};
    auto a = run_sweep(s);
    s.plan.workers = 2;
    auto b = run_sweep(s);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].value, b[i].value);
        EXPECT_EQ(a[i].std_error, b[i].std_error);
    }
}

TEST(Sweep, IntegralityErrorBecomesRow) {
    SweepSpec s = figure_preset("fig2b");
    s.values_db = {10.0};
    s.variants.resize(1);
    s.engines = {Engine::ClosedForm};
    auto rows = run_sweep(s);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].error, "integrality");
    EXPECT_TRUE(std::isnan(rows[0].value));
}

TEST(Csv, RoundTripIsBitExact) {
    SweepSpec s = small_sweep();
    s.values_db = {0.0, 7.5};
    auto rows = run_sweep(s);
    rows.push_back({"x|y", 1.0 / 3.0, "esmc", "closed_form", std::nan(""), 0.0, 25, 1e-300, 0.5, "capacity"});
    std::stringstream buf;
    write_csv(rows, buf);
    auto back = read_csv(buf);
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(back[i].scenario, rows[i].scenario);
        EXPECT_EQ(back[i].axis_value_db, rows[i].axis_value_db);
        EXPECT_EQ(back[i].metric, rows[i].metric);
        EXPECT_EQ(back[i].engine, rows[i].engine);
        if (rows[i].error.empty())
            EXPECT_EQ(back[i].value, rows[i].value);
        else
            EXPECT_TRUE(std::isnan(back[i].value));
        EXPECT_EQ(back[i].std_error, rows[i].std_error);
        EXPECT_EQ(back[i].series_terms, rows[i].series_terms);
        EXPECT_EQ(back[i].dropped_mass, rows[i].dropped_mass);
        EXPECT_EQ(back[i].runtime_ms, rows[i].runtime_ms);
        EXPECT_EQ(back[i].error, rows[i].error);
    }
}

TEST(Csv, Header) {
    std::stringstream buf;
    write_csv({}, buf);
    EXPECT_EQ(buf.str(), "scenario,axis_value_db,metric,engine,value,stderr,series_terms,dropped_mass,runtime_ms\n");
}

TEST(Csv, MissingFileIsIoError) { EXPECT_THROW(load_csv("/nonexistent/dir/x.csv"), IoError); }

TEST(Matrix, OneBlockPerCurve) {
    SweepSpec s = small_sweep();
    s.values_db = {0.0, 10.0};
    std::stringstream buf;
    write_matrix(run_sweep(s), buf);
    std::string text = buf.str(), line;
    int headers = 0;
    std::istringstream in(text);
    while (std::getline(in, line))
        if (line.rfind("# ", 0) == 0) ++headers;
    EXPECT_EQ(headers, 2);
}

TEST(Sweep, Fig3aClosedFormAgreesWithSimulation) {
    SweepSpec s = figure_preset("fig3a");
    s.values_db = {0.0, 10.0, 20.0};
    s.plan.trials = 100000;
    auto rows = run_sweep(s);
    ASSERT_EQ(rows.size(), 3u * 3u * 2u);
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
        const auto& cf = rows[i];
        const auto& mc = rows[i + 1];
        ASSERT_EQ(cf.engine, "closed_form");
        ASSERT_EQ(mc.engine, "monte_carlo");
        ASSERT_EQ(cf.scenario, mc.scenario);
        EXPECT_LE(std::abs(cf.value - mc.value), std::max(3 * mc.std_error, 0.01))
            << cf.scenario << " @" << cf.axis_value_db;
    }
}
