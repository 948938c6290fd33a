#include <algorithm>
#include <array>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "pidpoker/infodecomp.hpp"

namespace pidpoker::info {

JointDistribution3 read_distribution(std::istream& in) {
  std::map<std::array<std::size_t, 3>, double> cells;
  std::array<std::size_t, 3> sizes{0, 0, 0};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long long x = -1, y1 = -1, y2 = -1;
    double p = 0.0;
    std::string extra;
    if (!(fields >> x >> y1 >> y2 >> p) || (fields >> extra)) {
      throw InfoError(InfoErrc::MalformedInput,
                      "line " + std::to_string(line_no) +
                          ": expected \"x y1 y2 probability\"");
    }
    if (x < 0 || y1 < 0 || y2 < 0) {
      throw InfoError(InfoErrc::MalformedInput,
                      "line " + std::to_string(line_no) + ": negative state");
    }
    const std::array<std::size_t, 3> key{static_cast<std::size_t>(x),
                                         static_cast<std::size_t>(y1),
                                         static_cast<std::size_t>(y2)};
    if (cells.count(key)) {
      throw InfoError(InfoErrc::MalformedInput,
                      "line " + std::to_string(line_no) + ": duplicate cell");
    }
    cells[key] = p;
    for (int k = 0; k < 3; ++k) sizes[k] = std::max(sizes[k], key[k] + 1);
  }
  if (cells.empty()) {
    throw InfoError(InfoErrc::MalformedInput, "no cells");
  }
  std::vector<double> pmf(sizes[0] * sizes[1] * sizes[2], 0.0);
  for (const auto& [key, p] : cells) {
    pmf[(key[0] * sizes[1] + key[1]) * sizes[2] + key[2]] = p;
  }
  return JointDistribution3::from_probabilities(sizes[0], sizes[1], sizes[2],
                                                std::move(pmf));
}

void write_distribution(std::ostream& out, const JointDistribution3& dist) {
  char buf[64];
  for (std::size_t x = 0; x < dist.nx(); ++x)
    for (std::size_t a = 0; a < dist.ny1(); ++a)
      for (std::size_t b = 0; b < dist.ny2(); ++b) {
        const double p = dist.at(x, a, b);
        if (p <= 0.0) continue;
        std::snprintf(buf, sizeof buf, "%.17g", p);
        out << x << ' ' << a << ' ' << b << ' ' << buf << '\n';
      }
}

}  // namespace pidpoker::info
