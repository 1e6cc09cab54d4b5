// Copyright 2026 The lotdepth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/discrete_ot.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/network_simplex.hpp"
#include "core/sinkhorn.hpp"

namespace lotdepth {

namespace {

// Support pixels of an image with their coordinates and masses.
struct SupportPoints {
  std::vector<std::size_t> pixel;
  std::vector<double> x, y, mass;

  explicit SupportPoints(const ImageHistogram& image) {
    pixel = image.Support();
    x.reserve(pixel.size());
    y.reserve(pixel.size());
    mass.reserve(pixel.size());
    for (std::size_t k : pixel) {
      const Point2 p = image.grid().Coord(k);
      x.push_back(p.x);
      y.push_back(p.y);
      mass.push_back(image.weight(k));
    }
  }
  std::size_t size() const { return pixel.size(); }
};

struct PixelSquaredCost {
  const SupportPoints& src;
  const SupportPoints& dst;
  double operator()(int i, int j) const {
    const double dx = src.x[i] - dst.x[j];
    const double dy = src.y[i] - dst.y[j];
    return dx * dx + dy * dy;
  }
};

RowMatrix DenseCost(const SupportPoints& s, const SupportPoints& t) {
  RowMatrix c(s.size(), t.size());
  const PixelSquaredCost cost{s, t};
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      c(i, j) = cost(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return c;
}

Eigen::VectorXd ToVector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

TransportPlan PlanFromDense(const ImageHistogram& a, const ImageHistogram& b,
                            const SupportPoints& s, const SupportPoints& t,
                            const RowMatrix& cost, const RowMatrix& plan) {
  TransportPlan out{a, b, {}, 0.0};
  long double total = 0.0L;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      const double m = plan(i, j);
      if (m > 0.0) {
        out.coupling.push_back({s.pixel[i], t.pixel[j], m});
        total += static_cast<long double>(m) * cost(i, j);
      }
    }
  }
  out.cost = static_cast<double>(total);
  return out;
}

SinkhornResult RunSinkhorn(const RowMatrix& cost, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b, const EntropicOptions& options,
                           const Eigen::VectorXd* warm_g) {
  const SinkhornOptions so{options.epsilon, options.max_iter, options.tol};
  switch (options.mode) {
    case EntropicMode::kScaling:
      return SinkhornScaling(cost, a, b, so, warm_g);
    case EntropicMode::kLog:
      return SinkhornLog(cost, a, b, so, warm_g);
    case EntropicMode::kAuto:
      break;
  }
  if (options.epsilon < options.log_domain_threshold) {
    return SinkhornLog(cost, a, b, so, warm_g);
  }
  try {
    return SinkhornScaling(cost, a, b, so, warm_g);
  } catch (const UnderflowError&) {
    return SinkhornLog(cost, a, b, so, warm_g);
  }
}

}  // namespace

std::vector<double> TransportPlan::RowSums() const {
  std::vector<double> r(source.size(), 0.0);
  for (const auto& e : coupling) r[e.source] += e.mass;
  return r;
}

std::vector<double> TransportPlan::ColumnSums() const {
  std::vector<double> c(target.size(), 0.0);
  for (const auto& e : coupling) c[e.target] += e.mass;
  return c;
}

double TransportPlan::RecomputeCost() const {
  long double total = 0.0L;
  for (const auto& e : coupling) {
    total += static_cast<long double>(e.mass) *
             SquaredDistance(source.grid().Coord(e.source),
                             target.grid().Coord(e.target));
  }
  return static_cast<double>(total);
}

TransportPlan SolveExact(const ImageHistogram& a, const ImageHistogram& b,
                         const ExactOptions& options) {
  const SupportPoints s(a);
  const SupportPoints t(b);
  const PixelSquaredCost cost{s, t};
  SimplexOptions so;
  so.max_iterations = options.max_iterations;
  const SimplexSolution sol = SolveNetworkSimplex(s.mass, t.mass, cost, so);
  TransportPlan out{a, b, {}, sol.cost};
  out.coupling.reserve(sol.flows.size());
  for (const auto& f : sol.flows) {
    out.coupling.push_back({s.pixel[f.source], t.pixel[f.target], f.mass});
  }
  return out;
}

TransportPlan SolveEntropic(const ImageHistogram& a, const ImageHistogram& b,
                            const EntropicOptions& options) {
  const double eps[] = {options.epsilon};
  return SolveEntropicSchedule(a, b, eps, options).back();
}

std::vector<TransportPlan> SolveEntropicSchedule(
    const ImageHistogram& a, const ImageHistogram& b,
    std::span<const double> epsilons, const EntropicOptions& options) {
  if (epsilons.empty()) throw ArgumentError("epsilon schedule is empty");
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0)) throw ArgumentError("epsilon must be > 0");
    if (k > 0 && !(epsilons[k] < epsilons[k - 1])) {
      throw ArgumentError("epsilon schedule must be strictly decreasing");
    }
  }
  const SupportPoints s(a);
  const SupportPoints t(b);
  const RowMatrix cost = DenseCost(s, t);
  const Eigen::VectorXd va = ToVector(s.mass);
  const Eigen::VectorXd vb = ToVector(t.mass);
  std::vector<TransportPlan> plans;
  Eigen::VectorXd g;
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    EntropicOptions stage = options;
    stage.epsilon = epsilons[k];
    const SinkhornResult r =
        RunSinkhorn(cost, va, vb, stage, k == 0 ? nullptr : &g);
    if (!r.converged) {
      throw NumericalError("Sinkhorn did not converge at stage " +
                               std::to_string(k) + " (epsilon " +
                               std::to_string(epsilons[k]) + ")",
                           r.marginal_error);
    }
    g = r.g;
    plans.push_back(PlanFromDense(a, b, s, t, cost,
                                  PlanFromPotentials(cost, r.f, r.g, epsilons[k])));
  }
  return plans;
}

std::vector<double> GeometricSchedule(double start, double end, int stages) {
  if (stages < 1) throw ArgumentError("schedule needs at least one stage");
  if (!(start > 0.0) || !(end > 0.0)) {
    throw ArgumentError("schedule endpoints must be positive");
  }
  if (stages == 1) return {end};
  if (!(end < start)) throw ArgumentError("schedule must decrease");
  std::vector<double> out(static_cast<std::size_t>(stages));
  const double ratio = std::log(end / start) / (stages - 1);
  for (int k = 0; k < stages; ++k) out[k] = start * std::exp(ratio * k);
  out.front() = start;
  out.back() = end;
  return out;
}

MongeMapGrid BarycentricMap(const TransportPlan& plan) {
  const PixelGrid& sg = plan.source.grid();
  const PixelGrid& tg = plan.target.grid();
  std::vector<double> mass(sg.size(), 0.0), sx(sg.size(), 0.0), sy(sg.size(), 0.0);
  std::vector<int> entries(sg.size(), 0);
  std::vector<std::size_t> last_target(sg.size(), 0);
  for (const auto& e : plan.coupling) {
    const Point2 w = tg.Coord(e.target);
    mass[e.source] += e.mass;
    sx[e.source] += e.mass * w.x;
    sy[e.source] += e.mass * w.y;
    ++entries[e.source];
    last_target[e.source] = e.target;
  }
  MongeMapGrid out{sg, std::vector<Point2>(sg.size())};
  const double max_x = tg.width() - 1;
  const double max_y = tg.height() - 1;
  for (std::size_t k = 0; k < sg.size(); ++k) {
    if (entries[k] == 1) {
      // Exact for map plans; (m x) / m can be off by an ulp.
      out.images[k] = tg.Coord(last_target[k]);
    } else if (mass[k] > 0.0) {
      // Convex combinations stay in the target box up to rounding.
      out.images[k] = {std::clamp(sx[k] / mass[k], 0.0, max_x),
                       std::clamp(sy[k] / mass[k], 0.0, max_y)};
    } else {
      out.images[k] = sg.Coord(k);
    }
  }
  return out;
}

bool IsMapPlan(const TransportPlan& plan) {
  // Coupling is sorted by source, so repeated sources are adjacent.
  for (std::size_t k = 1; k < plan.coupling.size(); ++k) {
    if (plan.coupling[k].source == plan.coupling[k - 1].source) return false;
  }
  return true;
}

double Wasserstein(const ImageHistogram& a, const ImageHistogram& b) {
  return std::sqrt(std::max(0.0, SolveExact(a, b).cost));
}

}  // namespace lotdepth
