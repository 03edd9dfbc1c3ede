#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "annealab/benchmark.hpp"
#include "annealab/exact.hpp"
#include "annealab/lattice.hpp"
#include "annealab/schedule.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using namespace annealab;

namespace {

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CmdResult run_cli(const std::string& args) {
  std::string out_path = "/tmp/annealab_cli_stdout.txt";
  std::string err_path = "/tmp/annealab_cli_stderr.txt";
  std::string cmd =
      std::string(ANNEALAB_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
  int rc = std::system(cmd.c_str());
  CmdResult res;
  res.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  res.out = slurp(out_path);
  res.err = slurp(err_path);
  return res;
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::path("/tmp") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// generates the standard two-instance working set and a registry for both
struct CliFixture {
  fs::path dir;
  std::string inst0, inst1, registry;

  explicit CliFixture(const std::string& name) {
    dir = fresh_dir(name);
    CmdResult gen = run_cli("generate --dims 2 2 2 --boundary open --seed 5 --count 2 "
                            "--out-dir " + dir.string());
    REQUIRE(gen.code == 0);
    inst0 = (dir / "sg-2x2x2-o-s5-i0.txt").string();
    inst1 = (dir / "sg-2x2x2-o-s6-i1.txt").string();
    registry = (dir / "registry.txt").string();
    CmdResult gs = run_cli("groundstate --instance " + inst0 + " --instance " + inst1 +
                           " --out " + registry);
    REQUIRE(gs.code == 0);
  }
};

}  // namespace

TEST_CASE("cli usage and error exit codes") {
  CHECK(run_cli("").code == 2);  // a subcommand is required
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("--no-such-flag").code == 2);
  CHECK(run_cli("generate --dims 2 2").code == 2);  // needs three dimensions
  // runtime failures (not usage) exit 3
  CmdResult r = run_cli("anneal --method ca --instance /tmp/annealab_absent.txt "
                        "--schedule /tmp/annealab_absent.csv --seed 1");
  CHECK(r.code == 3);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("generate writes loadable instance files") {
  fs::path dir = fresh_dir("annealab_cli_gen");
  CmdResult res = run_cli("generate --dims 2 2 2 --boundary open --seed 5 --count 2 "
                          "--out-dir " + dir.string());
  REQUIRE(res.code == 0);
  std::istringstream lines(res.out);
  std::string l0, l1;
  std::getline(lines, l0);
  std::getline(lines, l1);
  CHECK(l0 == (dir / "sg-2x2x2-o-s5-i0.txt").string());
  CHECK(l1 == (dir / "sg-2x2x2-o-s6-i1.txt").string());
  SpinGlassInstance a = load_instance(l0);
  SpinGlassInstance b = load_instance(l1);
  CHECK(a.id == "sg-2x2x2-o-s5-i0");
  CHECK(a.seed == 5);
  CHECK(b.seed == 6);
  CHECK(a.bonds.size() == 12);
  bool couplings_differ = false;
  for (std::size_t k = 0; k < a.bonds.size(); ++k)
    couplings_differ = couplings_differ || a.bonds[k].coupling != b.bonds[k].coupling;
  CHECK(couplings_differ);

  // periodic boundaries need all dimensions >= 3
  CHECK(run_cli("generate --dims 2 2 2 --seed 1 --out-dir " + dir.string()).code == 2);

  fs::path dry = fresh_dir("annealab_cli_gen_dry");
  CmdResult d = run_cli("generate --dims 2 2 2 --boundary open --seed 5 --dry-run "
                        "--out-dir " + dry.string());
  CHECK(d.code == 0);
  CHECK_FALSE(fs::exists(dry / "sg-2x2x2-o-s5.txt"));
}

TEST_CASE("groundstate emits registry lines matching the oracle") {
  CliFixture fx("annealab_cli_gs");
  CmdResult res = run_cli("groundstate --instance " + fx.inst0);
  REQUIRE(res.code == 0);
  std::istringstream ss(res.out);
  std::string tag, id;
  double e0 = 0.0;
  ss >> tag >> id >> e0;
  CHECK(tag == "gs");
  CHECK(id == "sg-2x2x2-o-s5-i0");
  SpinGlassInstance inst = load_instance(fx.inst0);
  CHECK(e0 == doctest::Approx(brute_force_ground_state(inst).energy).epsilon(1e-14));

  GroundStateRegistry reg = import_ground_state(fx.registry);
  CHECK(reg.size() == 2);
  CHECK(reg.count("sg-2x2x2-o-s6-i1") == 1);
}

TEST_CASE("schedule files round trip through the cli") {
  fs::path dir = fresh_dir("annealab_cli_sched");
  std::string quantum = (dir / "quantum.csv").string();
  CmdResult res = run_cli("schedule --kind linear --control gamma --start 2 --end 0 "
                          "--steps 50 --out " + quantum);
  REQUIRE(res.code == 0);
  Schedule q = load_schedule(quantum);
  CHECK(q.kind == ScheduleKind::quantum_gamma);
  REQUIRE(q.length() == 50);
  CHECK(q.gamma.front() == 2.0);
  CHECK(q.gamma.back() == 0.0);

  std::string hybrid = (dir / "hybrid.csv").string();
  res = run_cli("schedule --kind hybrid --beta-start 0.5 --beta-end 8 --gamma0 2 "
                "--steps 40 --out " + hybrid);
  REQUIRE(res.code == 0);
  Schedule h = load_schedule(hybrid);
  CHECK(h.kind == ScheduleKind::hybrid);
  CHECK(h.beta.back() == 8.0);

  CHECK(run_cli("schedule --kind linear --control beta --start 4 --end 1 --steps 10 "
                "--out " + (dir / "bad.csv").string()).code != 0);
}

TEST_CASE("anneal prints a deterministic residual report") {
  CliFixture fx("annealab_cli_anneal");
  std::string sched = (fx.dir / "beta.csv").string();
  REQUIRE(run_cli("schedule --kind linear --control beta --start 0.1 --end 8 --steps 200 "
                  "--out " + sched).code == 0);
  std::string cmd = "anneal --method ca --instance " + fx.inst0 + " --schedule " + sched +
                    " --seed 3 --registry " + fx.registry;
  CmdResult first = run_cli(cmd);
  REQUIRE(first.code == 0);
  CHECK(first.out.find("method: ca") != std::string::npos);
  CHECK(first.out.find("e_res:") != std::string::npos);
  CHECK(first.out.find("e_res_per_spin:") != std::string::npos);
  CmdResult second = run_cli(cmd);
  CHECK(second.out == first.out);

  std::string qsched = (fx.dir / "gamma.csv").string();
  REQUIRE(run_cli("schedule --kind linear --control gamma --start 2 --end 0 --steps 200 "
                  "--out " + qsched).code == 0);
  CmdResult sqa = run_cli("anneal --method sqa --instance " + fx.inst0 + " --schedule " +
                          qsched + " --seed 4 --m-slices 8 --pimc-beta 8 --registry " +
                          fx.registry);
  REQUIRE(sqa.code == 0);
  CHECK(sqa.out.find("method: sqa") != std::string::npos);
  CHECK(sqa.out.find("e_res:") != std::string::npos);

  // a registry that lacks the instance is a missing-ground-truth failure
  std::string partial = (fx.dir / "partial.txt").string();
  REQUIRE(run_cli("groundstate --instance " + fx.inst1 + " --out " + partial).code == 0);
  CmdResult miss = run_cli("anneal --method ca --instance " + fx.inst0 + " --schedule " +
                           sched + " --seed 3 --registry " + partial);
  CHECK(miss.code == 4);
}

TEST_CASE("campaign dry run reports the planned work") {
  CliFixture fx("annealab_cli_dry");
  CmdResult res = run_cli("campaign --instance " + fx.inst0 + " --instance " + fx.inst1 +
                          " --registry " + fx.registry +
                          " --methods ca --t-a 10 --seed 1 --dry-run");
  REQUIRE(res.code == 0);
  CHECK(res.out.find("planned records: 2") != std::string::npos);
  CHECK(res.out.find("skipped: 0") != std::string::npos);

  std::string partial = (fx.dir / "partial.txt").string();
  REQUIRE(run_cli("groundstate --instance " + fx.inst0 + " --out " + partial).code == 0);
  CmdResult skip = run_cli("campaign --instance " + fx.inst0 + " --instance " + fx.inst1 +
                           " --registry " + partial +
                           " --methods ca --t-a 10 --seed 1 --dry-run");
  CHECK(skip.code == 4);
  CHECK(skip.out.find("skipped: 1") != std::string::npos);
  CHECK(skip.out.find("no ground energy: sg-2x2x2-o-s6-i1") != std::string::npos);

  CHECK(run_cli("campaign --instance " + fx.inst0 + " --registry " + fx.registry +
                " --t-a 10 --dry-run").code == 2);  // no seed
}

TEST_CASE("campaign produces records and aggregate tables") {
  CliFixture fx("annealab_cli_camp");
  fs::path out = fx.dir / "out";
  CmdResult res = run_cli("campaign --instance " + fx.inst0 + " --registry " + fx.registry +
                          " --methods ca --families linear --t-a 10 --t-a 30 "
                          "--repetitions 3 --seed 99 --out-dir " + out.string());
  REQUIRE(res.code == 0);
  CHECK(res.out.find("records: 6") != std::string::npos);
  CHECK(res.out.find("arm ca-linear N=8:") != std::string::npos);
  std::vector<BenchmarkRecord> recs = read_records_jsonl((out / "records.jsonl").string());
  REQUIRE(recs.size() == 6);
  for (const auto& r : recs) {
    CHECK(r.instance_id == "sg-2x2x2-o-s5-i0");
    CHECK(r.method == Method::ca);
  }
  CHECK(slurp((out / "tts.csv").string())
            .rfind("method,N,t_a,successes,trials,p,p_lower,p_upper,median_effort", 0) == 0);
  CHECK(slurp((out / "efforts.csv").string())
            .rfind("method,N,best_t_a,best_effort,interior", 0) == 0);
  CHECK(slurp((out / "residual_curves.csv").string())
            .rfind("method,N,t_a,median_Eres_per_spin,q25,q75", 0) == 0);
}

TEST_CASE("campaign reads toml config with command line overrides") {
  CliFixture fx("annealab_cli_config");
  std::string cfg = (fx.dir / "cfg.toml").string();
  {
    std::ofstream out(cfg);
    out << "[campaign]\n"
        << "seed = 99\n"
        << "repetitions = 2\n"
        << "t-a = [10, 30]\n";
  }
  CmdResult res = run_cli("campaign --config " + cfg + " --instance " + fx.inst0 +
                          " --registry " + fx.registry + " --methods ca --dry-run");
  REQUIRE(res.code == 0);
  CHECK(res.out.find("repetitions: 2") != std::string::npos);
  CHECK(res.out.find("planned records: 4") != std::string::npos);

  CmdResult over = run_cli("campaign --config " + cfg + " --instance " + fx.inst0 +
                           " --registry " + fx.registry +
                           " --methods ca --repetitions 1 --dry-run");
  REQUIRE(over.code == 0);
  CHECK(over.out.find("repetitions: 1") != std::string::npos);
  CHECK(over.out.find("planned records: 2") != std::string::npos);
}
