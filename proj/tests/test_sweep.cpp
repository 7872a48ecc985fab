#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "mardot/sweep.hpp"

using namespace mardot;

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

SolverSettings light_settings() {
  SolverSettings s;
  s.n_steps = 4096;
  s.n_grid = 512;
  s.k_max = 8;
  return s;
}

}  // namespace

TEST(SweepAxis, ParseAndValues) {
  const SweepAxis a = parse_sweep_axis("V:0.2:8:100");
  EXPECT_EQ(a.param, "V");
  EXPECT_EQ(a.count, 100);
  const auto v = a.values();
  ASSERT_EQ(v.size(), 100u);
  EXPECT_DOUBLE_EQ(v.front(), 0.2);
  EXPECT_DOUBLE_EQ(v.back(), 8.0);
  EXPECT_NEAR(v[1] - v[0], 7.8 / 99.0, 1e-15);
  EXPECT_THROW(parse_sweep_axis("V:0:1"), InvalidParameter);
  EXPECT_THROW(parse_sweep_axis("V:0:1:1"), InvalidParameter);
  EXPECT_THROW(parse_sweep_axis("V:1:1:5"), InvalidParameter);
  EXPECT_THROW(parse_sweep_axis("nope:0:1:5"), InvalidParameter);
  EXPECT_THROW(parse_sweep_axis("V:a:1:5"), InvalidParameter);
}

TEST(SweepPoints, LastAxisFastest) {
  SweepSpec spec;
  spec.axes = {parse_sweep_axis("V:1:2:2"), parse_sweep_axis("omega:-1:0:3")};
  const auto pts = sweep_points(spec);
  ASSERT_EQ(pts.size(), 6u);
  EXPECT_DOUBLE_EQ(pts[0].bias(), 1.0);
  EXPECT_DOUBLE_EQ(pts[0].omega, -1.0);
  EXPECT_DOUBLE_EQ(pts[1].omega, -0.5);
  EXPECT_DOUBLE_EQ(pts[3].bias(), 2.0);
  EXPECT_DOUBLE_EQ(pts[3].omega, -1.0);
}

TEST(Solver, NameRoundTrip) {
  EXPECT_EQ(parse_solver("evolve"), SolverKind::evolve);
  EXPECT_EQ(parse_solver("fourier"), SolverKind::fourier);
  EXPECT_STREQ(solver_name(SolverKind::fourier), "fourier");
  EXPECT_THROW(parse_solver("rk4"), InvalidParameter);
}

TEST(Differences, LinearDataGivesConstantSlope) {
  std::vector<double> x, y;
  for (int i = 0; i < 11; ++i) {
    x.push_back(0.3 * i);
    y.push_back(2.5 * x.back() - 1.0);
  }
  for (double d : central_difference(x, y)) EXPECT_NEAR(d, 2.5, 1e-13);
  EXPECT_THROW(central_difference({1.0}, {1.0}), InvalidParameter);
}

TEST(Peaks, MovingAverageMaxima) {
  const std::vector<double> y{0, 1, 5, 1, 0, 0, 2, 3, 2, 0};
  const auto p = find_peaks(y);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0], 2u);
  EXPECT_EQ(p[1], 7u);
  EXPECT_TRUE(find_peaks({1, 2}).empty());
  EXPECT_TRUE(find_peaks({1, 1, 1, 1}).empty());
}

TEST(Csv, SchemaIsExact) {
  std::ostringstream os;
  write_csv_header(os);
  PointResult r;
  set_parameter(r.params, "V", 1.5);
  set_parameter(r.params, "g_L", 0.5);
  r.currents.i_s = {-2e-3, 2e-3};
  r.currents.residual = 1e-17;
  r.status = "error: a, b";
  write_csv_row(os, r);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line[0], '#');
  std::getline(in, line);
  EXPECT_EQ(line,
            "V,omega,U,g_L,g_R,gamma_L,gamma_R,gamma_loss,gamma_deph,I_qd,I_s_L,I_s_R,I_p_L,I_p_R,"
            "I_incoh,pop_even,pop_odd,residual,solver,status");
  std::getline(in, line);
  const auto f = split(line);
  ASSERT_EQ(f.size(), 20u);
  EXPECT_EQ(f[0], "1.5");
  EXPECT_EQ(f[3], "0.5");
  EXPECT_EQ(f[10], "-0.2");  // units of gamma_ref
  EXPECT_EQ(f[11], "0.2");
  EXPECT_EQ(f[17], "1e-15");
  EXPECT_EQ(f[18], "fourier");
  EXPECT_EQ(f[19], "error: a; b");
}

TEST(Csv, TwelveSignificantDigits) {
  std::ostringstream os;
  PointResult r;
  set_parameter(r.params, "V", 1.0 / 3.0);
  write_csv_row(os, r);
  EXPECT_EQ(split(os.str())[0], "0.333333333333");
}

TEST(Json, CarriesCurrentsAndStatus) {
  PointResult r;
  set_parameter(r.params, "V", 2.0);
  r.currents.i_p = {1e-3, -1e-3};
  const auto j = nlohmann::json::parse(to_json(r));
  EXPECT_DOUBLE_EQ(j["V"].get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(j["I_p_L"].get<double>(), 0.1);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["solver"], "fourier");
  const auto arr = nlohmann::json::parse(to_json(std::vector<PointResult>{r, r}));
  EXPECT_EQ(arr.size(), 2u);
}

TEST(RunSweep, OrderedSinkAndFailuresInRow) {
  SweepSpec spec;
  spec.settings = light_settings();
  spec.axes = {parse_sweep_axis("V:-1:1:3")};  // the middle point has zero bias
  spec.jobs = 3;
  std::vector<double> seen;
  const auto rows = run_sweep(spec, [&](const PointResult& r) { seen.push_back(r.params.bias()); });
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(seen, (std::vector<double>{-1.0, 0.0, 1.0}));
  EXPECT_EQ(rows[1].status.rfind("error", 0), 0u) << rows[1].status;
  EXPECT_FALSE(rows[1].ok());
  EXPECT_TRUE(rows[0].status.rfind("error", 0) != 0u);
}

TEST(RunSweep, DeterministicAcrossWorkerCounts) {
  SweepSpec spec;
  spec.settings = light_settings();
  set_parameter(spec.base, "g", 0.3);
  spec.axes = {parse_sweep_axis("V:1:3:5")};
  spec.jobs = 1;
  const auto a = run_sweep(spec);
  spec.jobs = 4;
  const auto b = run_sweep(spec);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::ostringstream x, y;
    write_csv_row(x, a[i]);
    write_csv_row(y, b[i]);
    EXPECT_EQ(x.str(), y.str());
  }
}

TEST(RunSweep, BothSolversGiveTwoRows) {
  SweepSpec spec;
  spec.settings = light_settings();
  set_parameter(spec.base, "g", 0.3);
  spec.axes = {parse_sweep_axis("V:2:2.5:2")};
  spec.solvers = {SolverKind::evolve, SolverKind::fourier};
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].solver, SolverKind::evolve);
  EXPECT_EQ(rows[1].solver, SolverKind::fourier);
  EXPECT_DOUBLE_EQ(rows[1].params.bias(), 2.0);
}

TEST(ConductanceMap, FromRows) {
  const std::vector<double> v{1.0, 2.0, 3.0};
  const std::vector<double> w{-1.0, 0.0};
  std::vector<PointResult> rows;
  for (double vv : v)
    for (double ww : w) {
      PointResult r;
      set_parameter(r.params, "V", vv);
      r.params.omega = ww;
      r.currents.i_s[1] = (ww + 2.0) * vv;
      rows.push_back(r);
    }
  const ConductanceMap m = conductance_map(v, w, rows);
  ASSERT_EQ(m.conductance.size(), 2u);
  for (double d : m.conductance[0]) EXPECT_NEAR(d, 1.0 / rows[0].params.gamma_ref(), 1e-9);
  for (double d : m.conductance[1]) EXPECT_NEAR(d, 2.0 / rows[0].params.gamma_ref(), 1e-9);
  EXPECT_THROW(conductance_map(v, w, std::vector<PointResult>(2)), InvalidParameter);
  std::ostringstream os;
  write_conductance_csv(os, m);
  EXPECT_FALSE(os.str().empty());
}
