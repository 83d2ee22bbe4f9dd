#include <gtest/gtest.h>

#include <cmath>
#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <random>

#include "pacok/errors.hpp"
#include "pacok/io.hpp"

using namespace pacok;
namespace fs = std::filesystem;

namespace {

std::string config_error(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("pacok_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Config, EmptyGivesDefaults) {
  EXPECT_EQ(parse_config(""), RunConfig{});
  EXPECT_EQ(parse_config("# only a comment\n\n   \n"), RunConfig{});
}

TEST(Config, RangeErrorsNameTheKey) {
  const std::string e = config_error("N = 64\nomega = 1.5\n");
  EXPECT_NE(e.find("line 2"), std::string::npos) << e;
  EXPECT_NE(e.find("omega"), std::string::npos) << e;
  EXPECT_NE(config_error("tau = 0").find("tau"), std::string::npos);
  EXPECT_NE(config_error("N = 63").find("N"), std::string::npos);
  EXPECT_NE(config_error("\n\nbogus = 1").find("line 3"), std::string::npos);
  EXPECT_NE(config_error("bogus = 1").find("unknown key"), std::string::npos);
  EXPECT_NE(config_error("gamma 5").find("line 1"), std::string::npos);
  EXPECT_NE(config_error("gamma = five").find("gamma"), std::string::npos);
  EXPECT_NE(config_error("f = quintic").find("line 1"), std::string::npos);
  EXPECT_FALSE(config_error("dim = 1\ninit = random\nblocks = 5\nN = 64").empty());
}

TEST(Config, TableOneSetup) {
  const RunConfig c = parse_config(R"(
# temporal convergence setup
dim = 2
N = 256
X = 1
epsilon = 10h
omega = 0.1
gamma = 100
M = 1000
kappa = 2000
tau = 1e-4
T = 0.02
tol = -1
f = "cubic"
operator = inverse_laplacian
init = disk
)");
  EXPECT_EQ(c.n, 256);
  ASSERT_TRUE(c.epsilon_cells.has_value());
  EXPECT_EQ(*c.epsilon_cells, 10.0);
  EXPECT_EQ(c.params.omega, 0.1);
  EXPECT_EQ(c.params.gamma, 100.0);
  EXPECT_EQ(c.params.penalty, 1000.0);
  EXPECT_EQ(c.params.kappa, 2000.0);
  EXPECT_EQ(c.params.tau, 1e-4);
  EXPECT_EQ(c.t_max, 0.02);
  EXPECT_EQ(parse_config(to_config_text(c)), c);
  EXPECT_NEAR(make_model(c).params.epsilon, 10 * 2.0 / 256, 1e-16);
}

TEST(Config, RoundTripIsLossless) {
  RunConfig c;
  c.params = {0.1 / 3.0, 123.456, 1e4, 0.15, 2000.0, 2e-4};
  c.dim = 1;
  c.n = 1024;
  c.half_extent = 5.0;
  c.op = OperatorKind::GarnetFilm;
  c.garnet_delta = 0.7;
  c.f = Nonlinearity::Linear;
  c.extension = true;
  c.solutes = {0.0, -1.25};
  c.initial = InitialKind::Solvation;
  c.t_max = 50.0;
  c.tol = 1e-3;
  c.seed = 18446744073709551615ull;
  c.out_dir = "runs/out dir";
  c.snapshot_times = {0.0, 0.1, 1.0 / 3.0};
  c.monitor_stride = 10;
  c.record_stride = 100;
  c.scale = Scale::Paper;
  EXPECT_EQ(parse_config(to_config_text(c)), c);
}

TEST(Config, Overrides) {
  RunConfig c;
  apply_override(c, "gamma=42");
  apply_override(c, "pvism.solutes = [1, 2]");
  EXPECT_EQ(c.params.gamma, 42.0);
  EXPECT_EQ(c.solutes, (std::vector<double>{1, 2}));
  EXPECT_THROW(apply_override(c, "omega=2"), ConfigError);
  EXPECT_THROW(apply_override(c, "nonsense"), ConfigError);
}

TEST(Config, BuildsRunObjects) {
  RunConfig c = parse_config("dim = 1\nN = 64\nX = 5\ninit = solvation\npvism.solutes = [0]\nepsilon=5h");
  const Model m = make_model(c);
  EXPECT_TRUE(m.is_solvation());
  EXPECT_EQ(m.op.kind, OperatorKind::None);
  EXPECT_EQ(make_initial(c).grid(), make_grid(c));

  c = parse_config("init = random\nblocks = 8\nseed = 9\nN = 32");
  const GridField a = make_initial(c);
  EXPECT_EQ(a[0], initial_random_piecewise(make_grid(c), 0.0, 0.8, 8, 9)[0]);
}

TEST(Series, EmptyIsHeaderOnly) {
  EXPECT_EQ(format_series({}), "n,t,min,max,energy,increment\n");
  EXPECT_TRUE(parse_series("n,t,min,max,energy,increment\n").empty());
}

TEST(Series, RoundTripIsExact) {
  std::mt19937_64 rng(60);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<StepRecord> records;
  for (long n = 0; n < 1000; ++n) {
    records.push_back({n, u(rng) * 1e-7, u(rng), u(rng), u(rng) * 1e5, std::ldexp(u(rng), -60)});
  }
  const fs::path path = scratch_dir() / "series.csv";
  write_series(path, records);
  const std::vector<StepRecord> back = read_series(path);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_EQ(back[i], records[i]);
}

TEST(Series, MalformedInput) {
  EXPECT_THROW(parse_series(""), ConfigError);
  EXPECT_THROW(parse_series("a,b\n"), ConfigError);
  EXPECT_THROW(parse_series("n,t,min,max,energy,increment\n1,2,3\n"), ConfigError);
  EXPECT_THROW(parse_series("n,t,min,max,energy,increment\n1,2,3,4,5,x\n"), ConfigError);
  EXPECT_THROW(read_series("/nonexistent/series.csv"), ConfigError);
}

TEST(Snapshot, RoundTrip) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-0.1, 1.1);
  for (const PeriodicGrid& g : {PeriodicGrid::line(32, 5.0), PeriodicGrid({8, 12}, {1.0, 1.5})}) {
    GridField phi(g);
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = u(rng);
    const fs::path path = scratch_dir() / "snap.txt";
    write_snapshot(path, phi, 0.1 + 0.2);
    const LoadedSnapshot back = read_snapshot(path);
    EXPECT_EQ(back.phi.grid(), g);
    EXPECT_EQ(back.time, 0.1 + 0.2);
    for (std::size_t i = 0; i < phi.size(); ++i) EXPECT_EQ(back.phi[i], phi[i]);
  }
  const std::string header =
      format_snapshot(GridField(PeriodicGrid::square(4), 0.5), 2.0).substr(0, 45);
  EXPECT_EQ(header.substr(0, header.find('\n')), "# pacok-grid v1 dim=2 N=4,4 X=1,1 t=2");
}

TEST(Snapshot, Malformed) {
  EXPECT_THROW(parse_snapshot("hello\n1\n"), ConfigError);
  EXPECT_THROW(parse_snapshot("# pacok-grid v1 dim=1 N=4 X=1 t=0\n1\n2\n3\n"), ConfigError);
  EXPECT_THROW(parse_snapshot("# pacok-grid v1 dim=1 N=4 X=1\n1\n2\n3\n4\n"), ConfigError);
}

TEST(SymbolTable, Parse) {
  const SymbolTable t1 = parse_symbol_table("k1,value\n0,1\n1,0.5\n-1,0.5\n", 1);
  EXPECT_EQ(t1.size(), 3u);
  EXPECT_EQ(t1.at({-1, 0}), 0.5);
  const SymbolTable t2 = parse_symbol_table("0,0,1\n1,-2,0.25\n", 2);
  EXPECT_EQ(t2.at({1, -2}), 0.25);
  EXPECT_THROW(parse_symbol_table("0,1\n", 2), ConfigError);
}

TEST(EnergyCsv, Layout) {
  EnergyBreakdown e{1, 2, 3, 4, 0, 10};
  EXPECT_EQ(format_energy_csv(e),
            "interfacial,well,longrange,penalty,solvation,total\n1,2,3,4,0,10\n");
}
