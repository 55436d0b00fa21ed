#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string output;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SLANTS_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  [[nodiscard]] std::string operator/(const std::string& f) const { return (path / f).string(); }
};

}  // namespace

TEST_CASE("gen writes a header and twelve significant digits") {
  TempDir dir("slants_cli_gen");
  REQUIRE(run("gen -e 1 -T 20 --seed 3 -o " + dir / "a.csv").status == 0);
  std::ifstream in(dir / "a.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "X1,X2");
  std::getline(in, line);
  const auto comma = line.find(',');
  const std::string cell = line.substr(0, comma);
  std::size_t digits = 0;
  for (char ch : cell) digits += (ch >= '0' && ch <= '9');
  CHECK(digits <= 13);  // 12 significant digits plus a possible leading zero
  CHECK(line.substr(comma + 1) == "0");
  CHECK(run("gen -e 9 -T 5").status != 0);
}

TEST_CASE("fit writes all outputs reproducibly") {
  TempDir dir("slants_cli_fit");
  REQUIRE(run("gen -e 1 -T 500 --seed 1 -o " + dir / "e1.csv").status == 0);
  const std::string args = "fit -i " + dir / "e1.csv" + " --target 2 -L 8 -v 10 --step2 --ar-order 3";
  const auto a = run(args + " -o " + dir / "a");
  REQUIRE_MESSAGE(a.status == 0, a.output);
  REQUIRE(run(args + " -o " + dir / "b").status == 0);
  for (const char* f : {"errors.csv", "components.csv", "tuning.csv", "selection.txt"}) {
    CHECK(fs::exists(dir.path / "a" / f));
    CHECK(slurp(dir.path / "a" / f) == slurp(dir.path / "b" / f));
  }
  CHECK(first_line(dir.path / "a" / "errors.csv") == "t,y,yhat,err,cum_avg_err,ar_err,ar_cum_avg");
  CHECK(first_line(dir.path / "a" / "components.csv") == "covariate,lag,x,f_hat");
  CHECK(first_line(dir.path / "a" / "tuning.csv") == "t,lambda,tau,err_lo,err_mid,err_hi");
  CHECK(slurp(dir.path / "a" / "selection.txt") == "covariate,lag\n1,1\n1,7\n");

  std::set<std::string> components;
  std::ifstream comp(dir.path / "a" / "components.csv");
  std::string line;
  std::getline(comp, line);
  std::size_t rows = 0;
  while (std::getline(comp, line)) {
    components.insert(line.substr(0, line.find(',', line.find(',') + 1)));
    ++rows;
  }
  CHECK(components == std::set<std::string>{"1,1", "1,7"});
  CHECK(rows == 400);
}

TEST_CASE("multi-target fit, snapshot and graph extraction") {
  TempDir dir("slants_cli_graph");
  REQUIRE(run("gen -e 3 -T 600 --seed 2 -o " + dir / "e3.csv").status == 0);
  const auto r = run("fit -i " + dir / "e3.csv" + " --all-targets -L 2 -v 6 -o " + dir / "out" +
                     " --snapshot " + dir / "m.snp");
  REQUIRE_MESSAGE(r.status == 0, r.output);
  const std::string dot = slurp(dir.path / "out" / "graph.dot");
  CHECK(dot.rfind("digraph causality {\n", 0) == 0);
  const auto g = run("graph -s " + dir / "m.snp" + " -o " + dir / "again.dot");
  REQUIRE(g.status == 0);
  CHECK(slurp(dir.path / "again.dot") == dot);
  CHECK(run("graph -s " + dir / "missing.snp").status != 0);
}

TEST_CASE("config file defaults and overrides") {
  TempDir dir("slants_cli_config");
  REQUIRE(run("gen -e 1 -T 300 --seed 4 -o " + dir / "e1.csv").status == 0);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "# stationary experiment\ntarget = 2\nmax_lag=8\nbasis-size=10\nar-order=2\n";
  }
  const auto a = run("fit --config " + dir / "run.cfg" + " -i " + dir / "e1.csv" + " -o " + dir / "a");
  REQUIRE_MESSAGE(a.status == 0, a.output);
  CHECK(first_line(dir.path / "a" / "errors.csv") == "t,y,yhat,err,cum_avg_err,ar_err,ar_cum_avg");
  // The first prediction comes after L lags plus the warm-up.
  std::ifstream in(dir.path / "a" / "errors.csv");
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line.rfind("59,", 0) == 0);

  const auto b = run("fit --config " + dir / "run.cfg" + " -i " + dir / "e1.csv" + " -o " + dir / "b --max-lag 2");
  REQUIRE(b.status == 0);
  std::ifstream in2(dir.path / "b" / "errors.csv");
  std::getline(in2, line);
  std::getline(in2, line);
  CHECK(line.rfind("53,", 0) == 0);

  {
    std::ofstream cfg(dir / "bad.cfg");
    cfg << "max_lag=8\nbogus_key=1\n";
  }
  const auto c = run("fit --config " + dir / "bad.cfg" + " -i " + dir / "e1.csv");
  CHECK(c.status != 0);
  CHECK(c.output.find("unknown key 'bogus-key'") != std::string::npos);
  CHECK(c.output.find(":2:") != std::string::npos);
}

TEST_CASE("malformed input is reported with its line number") {
  TempDir dir("slants_cli_bad");
  {
    std::ofstream f(dir / "ragged.csv");
    f << "a,b\n1,2\n3\n";
  }
  auto r = run("fit -i " + dir / "ragged.csv");
  CHECK(r.status != 0);
  CHECK(r.output.find("line 3") != std::string::npos);
  {
    std::ofstream f(dir / "text.csv");
    f << "a\n1\n2\nabc\n";
  }
  r = run("fit -i " + dir / "text.csv");
  CHECK(r.status != 0);
  CHECK(r.output.find("non-numeric value 'abc' at line 4") != std::string::npos);
  {
    std::ofstream f(dir / "hole.csv");
    f << "a,b\n1,2\n,4\n";
  }
  r = run("fit -i " + dir / "hole.csv");
  CHECK(r.status != 0);
  CHECK(r.output.find("missing value at line 3") != std::string::npos);
  {
    std::ofstream f(dir / "short.csv");
    f << "a\n";
    for (int i = 0; i < 20; ++i) f << i << "\n";
  }
  r = run("fit -i " + dir / "short.csv");
  CHECK(r.status != 0);
  CHECK(r.output.find("too short") != std::string::npos);
}

TEST_CASE("six-column and one-column series run with the AR baseline") {
  TempDir dir("slants_cli_shapes");
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  {
    std::ofstream f(dir / "six.csv");
    f << "t1,t2,t3,t4,t5,t6\n";
    for (int t = 0; t < 400; ++t) {
      for (int d = 0; d < 6; ++d) f << (d ? "," : "") << normal(gen);
      f << "\n";
    }
  }
  {
    std::ofstream f(dir / "one.csv");
    f << "flu\n";
    double y = 0.0;
    for (int t = 0; t < 600; ++t) {
      y = 0.6 * y + normal(gen);
      f << y << "\n";
    }
  }
  auto r = run("fit -i " + dir / "six.csv" + " --target 3 -L 3 --ar-order 3 -o " + dir / "six");
  CHECK_MESSAGE(r.status == 0, r.output);
  CHECK(fs::exists(dir.path / "six" / "errors.csv"));
  r = run("fit -i " + dir / "one.csv" + " -L 54 -v 5 --ar-order 5 --step2 -o " + dir / "one");
  CHECK_MESSAGE(r.status == 0, r.output);
  CHECK(fs::exists(dir.path / "one" / "selection.txt"));
}

TEST_CASE("constant series fits an intercept only") {
  TempDir dir("slants_cli_const");
  {
    std::ofstream f(dir / "c.csv");
    f << "x\n";
    for (int t = 0; t < 100; ++t) f << "2.5\n";
  }
  const auto r = run("fit -i " + dir / "c.csv" + " -L 2 -v 4 -o " + dir / "out");
  REQUIRE_MESSAGE(r.status == 0, r.output);
  CHECK(slurp(dir.path / "out" / "components.csv") == "covariate,lag,x,f_hat\n");
  std::ifstream in(dir.path / "out" / "errors.csv");
  std::string line;
  std::string last;
  while (std::getline(in, line)) last = line;
  const double err = std::stod(last.substr(last.rfind(',') + 1));
  CHECK(err < 1e-12);
}

TEST_CASE("scale subcommand") {
  TempDir dir("slants_cli_scale");
  const auto r = run("scale -T 150 --repeats 1 -o " + dir / "s.csv");
  REQUIRE_MESSAGE(r.status == 0, r.output);
  const std::string csv = slurp(dir.path / "s.csv");
  CHECK(csv.rfind("T,mean_seconds,stderr_seconds,method\n150,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(run("scale -T 300,200 --repeats 1").status != 0);
}
