// Integration tests that exercise the installed command-line surface.
// The binary path comes from the PATCHWORK_CLI environment variable set by
// the build system.
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "support/temp_dir.hpp"

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

const char* cli_path() {
  const char* path = std::getenv("PATCHWORK_CLI");
  REQUIRE_MESSAGE(path != nullptr, "PATCHWORK_CLI must point at the built binary");
  return path;
}

CommandResult run_cli(const std::string& args) {
  test_support::TempDir streams("cli_streams");
  const auto out_path = streams.file("out.txt");
  const auto err_path = streams.file("err.txt");
  const std::string command = std::string(cli_path()) + " " + args + " > " +
                              out_path.string() + " 2> " + err_path.string();
  const int raw = std::system(command.c_str());
  CommandResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.stdout_text = read_file(out_path);
  result.stderr_text = read_file(err_path);
  return result;
}

}  // namespace

TEST_CASE("dump-config round-trips through --config") {
  test_support::TempDir dir("cli");
  const auto first = run_cli("dump-config");
  CHECK(first.exit_code == 0);
  CHECK(first.stderr_text.empty());
  CHECK(first.stdout_text.find("[czm]") != std::string::npos);
  CHECK(first.stdout_text.find("l_min = 2.7") != std::string::npos);

  std::ofstream(dir.file("cfg.toml")) << first.stdout_text;
  const auto second = run_cli("dump-config --config " + dir.file("cfg.toml").string());
  CHECK(second.exit_code == 0);
  CHECK(second.stdout_text == first.stdout_text);
}

TEST_CASE("synth writes deterministic frame pairs with the documented sizes") {
  test_support::TempDir dir("cli");
  const auto a = run_cli("synth --out " + dir.file("a").string() + " --seed 9");
  CHECK(a.exit_code == 0);
  CHECK(a.stderr_text.empty());
  CHECK(std::filesystem::file_size(dir.file("a") / "000000.bin") == 800000);
  CHECK(std::filesystem::file_size(dir.file("a") / "000000.label") == 200000);

  const auto b = run_cli("synth --out " + dir.file("b").string() + " --seed 9");
  CHECK(b.exit_code == 0);
  CHECK(read_file(dir.file("a") / "000000.bin") == read_file(dir.file("b") / "000000.bin"));
  CHECK(read_file(dir.file("a") / "000000.label") == read_file(dir.file("b") / "000000.label"));
}

TEST_CASE("synth honors scene config, including the ramp") {
  test_support::TempDir dir("cli");
  std::ofstream(dir.file("ramp.toml")) << "[scene]\nground_points = 4000\nramp_points = 500\n"
                                          "ramp_grade = 0.3\n";
  const auto result = run_cli("synth --out " + dir.file("r").string() + " --config " +
                              dir.file("ramp.toml").string());
  CHECK(result.exit_code == 0);

  // Terrain label 72 must appear in the label stream.
  const std::string labels = read_file(dir.file("r") / "000000.label");
  bool has_terrain = false;
  for (std::size_t i = 0; i + 3 < labels.size(); i += 4) {
    if (static_cast<unsigned char>(labels[i]) == 72 && labels[i + 1] == 0) has_terrain = true;
  }
  CHECK(has_terrain);
}

TEST_CASE("segment writes a ply per frame and reports exit codes correctly") {
  test_support::TempDir dir("cli");
  REQUIRE(run_cli("synth --out " + dir.file("in").string() + " --seed 4").exit_code == 0);

  const auto ok = run_cli("segment --input " + (dir.file("in") / "000000.bin").string() +
                          " --out " + dir.file("out").string());
  CHECK(ok.exit_code == 0);
  CHECK(ok.stderr_text.empty());
  CHECK(std::filesystem::exists(dir.file("out") / "000000.ply"));

  const auto missing = run_cli("segment --input " + dir.file("nope.bin").string() + " --out " +
                               dir.file("out").string());
  CHECK(missing.exit_code == 2);
  CHECK(missing.stderr_text.find("error: io:") == 0);

  std::ofstream(dir.file("bad.toml")) << "[czm]\nno_such_knob = 1\n";
  const auto bad_config = run_cli("segment --input " + (dir.file("in") / "000000.bin").string() +
                                  " --out " + dir.file("out").string() + " --config " +
                                  dir.file("bad.toml").string());
  CHECK(bad_config.exit_code == 1);
  CHECK(bad_config.stderr_text.find("czm.no_such_knob") != std::string::npos);
}

TEST_CASE("segment --bin-csv exports per-bin diagnostics") {
  test_support::TempDir dir("cli");
  REQUIRE(run_cli("synth --out " + dir.file("in").string()).exit_code == 0);
  const auto result = run_cli("segment --input " + (dir.file("in") / "000000.bin").string() +
                              " --out " + dir.file("out").string() + " --bin-csv");
  CHECK(result.exit_code == 0);
  const std::string csv = read_file(dir.file("out") / "000000_bins.csv");
  CHECK(csv.find("zone,ring,sector,status,n_points,n_ground,phi,psi,varphi,likelihood,is_ground") == 0);
  std::size_t lines = 0;
  for (char c : csv) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == 505);  // header + one row per bin
}

TEST_CASE("eval produces per-frame csv rows plus a summary") {
  test_support::TempDir dir("cli");
  REQUIRE(run_cli("synth --out " + dir.file("in").string() + " --frames 3 --seed 2").exit_code == 0);

  const auto result = run_cli("eval --input " + dir.file("in").string() + " --out " +
                              dir.file("eval.csv").string());
  CHECK(result.exit_code == 0);
  CHECK(result.stderr_text.empty());
  CHECK(result.stdout_text.find("precision: mean") != std::string::npos);
  CHECK(result.stdout_text.find("recall: mean") != std::string::npos);

  const std::string csv = read_file(dir.file("eval.csv"));
  std::size_t lines = 0;
  for (char c : csv) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == 5);  // header + 3 frames + summary
  CHECK(csv.find("000001,") != std::string::npos);
  CHECK(csv.find("summary,") != std::string::npos);

  // Frame-level parallelism does not change the scores (timing columns may).
  const auto parallel = run_cli("eval --input " + dir.file("in").string() + " --jobs 2 --out " +
                                dir.file("eval2.csv").string());
  CHECK(parallel.exit_code == 0);
  const std::string csv2 = read_file(dir.file("eval2.csv"));
  const auto score_part = [](const std::string& text) {
    std::string kept;
    std::istringstream lines_in(text);
    std::string line;
    while (std::getline(lines_in, line)) {
      std::size_t commas = 0;
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == ',') {
          if (++commas == 9) {
            kept += line.substr(0, i);
            break;
          }
        }
      }
      kept += '\n';
    }
    return kept;
  };
  CHECK(score_part(csv2) == score_part(csv));
}

TEST_CASE("eval rejects unpaired frames listing the stems") {
  test_support::TempDir dir("cli");
  REQUIRE(run_cli("synth --out " + dir.file("in").string()).exit_code == 0);
  std::filesystem::remove(dir.file("in") / "000000.label");
  std::ofstream(dir.file("in") / "000000.bin", std::ios::app);  // keep the bin

  const auto result = run_cli("eval --input " + dir.file("in").string());
  CHECK(result.exit_code == 1);
  CHECK(result.stderr_text.find("unpaired") != std::string::npos);
  CHECK(result.stderr_text.find("000000") != std::string::npos);
}

TEST_CASE("eval compares ablation variants") {
  test_support::TempDir dir("cli");
  std::ofstream(dir.file("roof.toml")) << "[scene]\nground_points = 20000\nroof_points = 400\n";
  REQUIRE(run_cli("synth --out " + dir.file("in").string() + " --config " +
                  dir.file("roof.toml").string() + " --seed 7")
              .exit_code == 0);

  const auto with_u = run_cli("eval --input " + dir.file("in").string() + " --variant czm+U");
  const auto with_ue = run_cli("eval --input " + dir.file("in").string() + " --variant czm+U+E");
  CHECK(with_u.exit_code == 0);
  CHECK(with_ue.exit_code == 0);
  CHECK(with_u.stdout_text != with_ue.stdout_text);

  const auto bad = run_cli("eval --input " + dir.file("in").string() + " --variant czm+X");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("bench prints the bin count and the requested rep count") {
  test_support::TempDir dir("cli");
  std::ofstream(dir.file("small.toml")) << "[scene]\nground_points = 8000\n";
  REQUIRE(run_cli("synth --out " + dir.file("in").string() + " --config " +
                  dir.file("small.toml").string())
              .exit_code == 0);

  const auto result = run_cli("bench --input " + dir.file("in").string() + " --reps 10 --warmup 3");
  CHECK(result.exit_code == 0);
  CHECK(result.stderr_text.empty());
  CHECK(result.stdout_text.find("bins: 504") != std::string::npos);
  CHECK(result.stdout_text.find("timed runs: 10 (warmup 3)") != std::string::npos);

  const auto ransac = run_cli("bench --input " + dir.file("in").string() +
                              " --reps 2 --warmup 0 --method ransac");
  CHECK(ransac.exit_code == 0);
  CHECK(ransac.stdout_text.find("method: ransac") != std::string::npos);
}

TEST_CASE("unknown subcommands and flags are validation errors") {
  CHECK(run_cli("frobnicate").exit_code == 1);
  CHECK(run_cli("segment --no-such-flag x").exit_code == 1);
}
