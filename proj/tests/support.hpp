#pragma once

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pidpoker/infodecomp.hpp"

namespace testsupport {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(PIDPOKER_FIXTURES) / name;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Random 3x3x3 pmf. About a third of the draws zero out some cells so the
// suite also covers states with empty rows and columns.
inline std::vector<double> random_pmf(std::mt19937_64& gen, std::size_t cells = 27) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(cells);
  const bool sparse = u(gen) < 0.33;
  double sum = 0;
  for (auto& v : p) {
    v = (sparse && u(gen) < 0.4) ? 0.0 : -std::log(u(gen) + 1e-300);
    sum += v;
  }
  if (sum == 0) {
    p[0] = 1;
    sum = 1;
  }
  for (auto& v : p) v /= sum;
  return p;
}

inline pidpoker::info::JointDistribution3 random_dist(std::mt19937_64& gen) {
  return pidpoker::info::JointDistribution3::from_probabilities(3, 3, 3, random_pmf(gen));
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("pidpoker_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

// Runs the CLI; returns its exit status. Output goes to the given file.
inline int run_cli(const std::string& args, const std::filesystem::path& log = "/dev/null") {
  const std::string cmd = std::string("\"") + PIDPOKER_CLI + "\" " + args + " >\"" +
                          log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

}  // namespace testsupport
