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

#ifndef ENTBUFFER_CONTOUR_H
#define ENTBUFFER_CONTOUR_H

#include <utility>
#include <vector>

namespace entbuffer {

using Polyline = std::vector<std::pair<double, double>>;

/// Marching squares on values(i, j) = values[i * ys.size() + j] sampled at
/// (xs[i], ys[j]). NaN samples mark cells to skip. Segments are joined into
/// ordered polylines.
std::vector<Polyline> marching_squares(const std::vector<double>& xs, const std::vector<double>& ys,
                                       const std::vector<double>& values, double level);

}  // namespace entbuffer

#endif  // ENTBUFFER_CONTOUR_H
