// Copyright 2026 The entbuffer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "entbuffer/contour.h"

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

namespace entbuffer {

namespace {

using EdgeKey = std::int64_t;

struct Segment {
  EdgeKey from;
  EdgeKey to;
  bool used = false;
};

}  // namespace

std::vector<Polyline> marching_squares(const std::vector<double>& xs, const std::vector<double>& ys,
                                       const std::vector<double>& values, double level) {
  const std::size_t nx = xs.size();
  const std::size_t ny = ys.size();
  if (values.size() != nx * ny) throw std::invalid_argument("marching_squares: size mismatch");
  if (nx < 2 || ny < 2) return {};

  auto at = [&](std::size_t i, std::size_t j) { return values[i * ny + j]; };
  // Horizontal edges (i,j)-(i+1,j) and vertical edges (i,j)-(i,j+1).
  auto h_key = [&](std::size_t i, std::size_t j) { return static_cast<EdgeKey>(2 * (i * ny + j)); };
  auto v_key = [&](std::size_t i, std::size_t j) {
    return static_cast<EdgeKey>(2 * (i * ny + j) + 1);
  };

  std::map<EdgeKey, std::pair<double, double>> points;
  auto crossing = [&](EdgeKey key, double x0, double y0, double f0, double x1, double y1,
                      double f1) {
    const double t = (level - f0) / (f1 - f0);
    points.emplace(key, std::make_pair(x0 + t * (x1 - x0), y0 + t * (y1 - y0)));
  };

  std::vector<Segment> segments;
  for (std::size_t i = 0; i + 1 < nx; ++i) {
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      const double f00 = at(i, j), f10 = at(i + 1, j), f11 = at(i + 1, j + 1), f01 = at(i, j + 1);
      if (std::isnan(f00) || std::isnan(f10) || std::isnan(f11) || std::isnan(f01)) continue;
      const bool s00 = f00 > level, s10 = f10 > level, s11 = f11 > level, s01 = f01 > level;

      // bottom, right, top, left
      const EdgeKey keys[4] = {h_key(i, j), v_key(i + 1, j), h_key(i, j + 1), v_key(i, j)};
      bool crosses[4] = {s00 != s10, s10 != s11, s01 != s11, s00 != s01};
      if (crosses[0]) crossing(keys[0], xs[i], ys[j], f00, xs[i + 1], ys[j], f10);
      if (crosses[1]) crossing(keys[1], xs[i + 1], ys[j], f10, xs[i + 1], ys[j + 1], f11);
      if (crosses[2]) crossing(keys[2], xs[i], ys[j + 1], f01, xs[i + 1], ys[j + 1], f11);
      if (crosses[3]) crossing(keys[3], xs[i], ys[j], f00, xs[i], ys[j + 1], f01);

      const int count = crosses[0] + crosses[1] + crosses[2] + crosses[3];
      if (count == 2) {
        EdgeKey ends[2];
        int n = 0;
        for (int e = 0; e < 4; ++e) {
          if (crosses[e]) ends[n++] = keys[e];
        }
        segments.push_back({ends[0], ends[1]});
      } else if (count == 4) {
        const bool center = 0.25 * (f00 + f10 + f11 + f01) > level;
        if (center == s00) {
          segments.push_back({keys[0], keys[1]});
          segments.push_back({keys[2], keys[3]});
        } else {
          segments.push_back({keys[3], keys[0]});
          segments.push_back({keys[1], keys[2]});
        }
      }
    }
  }

  std::map<EdgeKey, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].from].push_back(s);
    incident[segments[s].to].push_back(s);
  }

  auto walk = [&](EdgeKey start) {
    Polyline line{points.at(start)};
    EdgeKey cur = start;
    for (;;) {
      std::size_t next = segments.size();
      for (std::size_t s : incident[cur]) {
        if (!segments[s].used) {
          next = s;
          break;
        }
      }
      if (next == segments.size()) break;
      segments[next].used = true;
      cur = segments[next].from == cur ? segments[next].to : segments[next].from;
      line.push_back(points.at(cur));
    }
    return line;
  };

  std::vector<Polyline> lines;
  // Open lines start at an endpoint with a single incident segment.
  for (const auto& [key, segs] : incident) {
    if (segs.size() == 1 && !segments[segs[0]].used) lines.push_back(walk(key));
  }
  for (const auto& seg : segments) {
    if (!seg.used) lines.push_back(walk(seg.from));
  }
  return lines;
}

}  // namespace entbuffer
