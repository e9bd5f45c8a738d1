#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "gibbs/errors.hpp"
#include "gibbs/kinetics/gas.hpp"
#include "gibbs/rng.hpp"

namespace gibbs::kinetics {
namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();
constexpr int kMaxZeroTimeEvents = 32;

enum Slot : std::size_t { kLeftWall = 0, kRightWall, kBottomWall, kTopWall, kPartition, kFirstMembrane };

struct MembraneTrack {
  double x0;
  double speed;
  const std::int8_t* sides;
};

struct FlightContext {
  double width;
  double height;
  bool diffuse;
  bool has_partition;
  double partition_x;
  const std::int8_t* partition_sides;
  std::vector<MembraneTrack> membranes;
  double span;
  std::size_t stride;  // impulse slots, then one work slot per membrane
};

// Cosine-law re-emission at fixed speed. The tangential sign follows the
// incoming one (times a random sign) so that mirror images stay mirror images.
void diffuse_reflect(Vec2& v, double inward, SplitMix64& rng) {
  const double speed = v.norm();
  const double s = 2.0 * rng.uniform() - 1.0;
  const double tangential = std::copysign(1.0, v.x()) * s * speed;
  v.x() = tangential;
  v.y() = inward * speed * std::sqrt(std::max(0.0, 1.0 - s * s));
}

void fly(std::size_t i, Particle& p, SplitMix64& rng, const FlightContext& c, double* out) {
  const double w = c.width;
  const double h = c.height;
  double& x = p.position.x();
  double& y = p.position.y();
  double& vx = p.velocity.x();
  double& vy = p.velocity.y();
  double* work = out + kFirstMembrane + c.membranes.size();

  double t = 0.0;
  int zero_run = 0;
  for (;;) {
    double best = c.span - t;
    std::size_t event = std::numeric_limits<std::size_t>::max();
    auto consider = [&](double dt, std::size_t which) {
      dt = std::max(dt, 0.0);
      if (dt < best) {
        best = dt;
        event = which;
      }
    };

    if (vx < 0.0) consider(x / -vx, kLeftWall);
    else if (vx > 0.0) consider((w - x) / vx, kRightWall);
    if (vy < 0.0) consider(y / -vy, kBottomWall);
    else if (vy > 0.0) consider((h - y) / vy, kTopWall);

    if (c.has_partition) {
      const std::int8_t side = c.partition_sides[i];
      if (side < 0 && vx > 0.0) consider((c.partition_x - x) / vx, kPartition);
      else if (side > 0 && vx < 0.0) consider((x - c.partition_x) / -vx, kPartition);
    }
    for (std::size_t m = 0; m < c.membranes.size(); ++m) {
      const MembraneTrack& mt = c.membranes[m];
      const std::int8_t side = mt.sides[i];
      if (side == 0) continue;
      const double xm = mt.x0 + mt.speed * t;
      const double rel = vx - mt.speed;
      if (side < 0 && rel > 0.0) consider((xm - x) / rel, kFirstMembrane + m);
      else if (side > 0 && rel < 0.0) consider((x - xm) / -rel, kFirstMembrane + m);
    }

    x += vx * best;
    y += vy * best;
    t += best;
    if (event == std::numeric_limits<std::size_t>::max()) break;

    if (best > 0.0) {
      zero_run = 0;
    } else if (++zero_run > kMaxZeroTimeEvents) {
      throw SimulationError("particle " + std::to_string(i) + " is trapped between converging boundaries");
    }

    switch (event) {
      case kLeftWall:
        x = 0.0;
        out[kLeftWall] += 2.0 * std::abs(vx);
        vx = -vx;
        break;
      case kRightWall:
        x = w;
        out[kRightWall] += 2.0 * std::abs(vx);
        vx = -vx;
        break;
      case kBottomWall:
      case kTopWall: {
        const double inward = event == kBottomWall ? 1.0 : -1.0;
        y = event == kBottomWall ? 0.0 : h;
        const double vy_in = vy;
        if (c.diffuse) {
          diffuse_reflect(p.velocity, inward, rng);
        } else {
          vy = -vy;
        }
        out[event] += std::abs(vy_in) + std::abs(vy);
        break;
      }
      case kPartition:
        x = c.partition_x;
        out[kPartition] += 2.0 * std::abs(vx);
        vx = -vx;
        break;
      default: {
        const std::size_t m = event - kFirstMembrane;
        const MembraneTrack& mt = c.membranes[m];
        x = mt.x0 + mt.speed * t;
        const double reflected = 2.0 * mt.speed - vx;
        out[event] += std::abs(reflected - vx);
        work[m] += 0.5 * (vx * vx - reflected * reflected);
        vx = reflected;
        break;
      }
    }
  }

  // Rounding can leave a particle a hair outside its region; pull it back.
  x = std::clamp(x, 0.0, w);
  y = std::clamp(y, 0.0, h);
  if (c.has_partition) {
    const std::int8_t side = c.partition_sides[i];
    if (side < 0) x = std::min(x, c.partition_x);
    else if (side > 0) x = std::max(x, c.partition_x);
  }
  for (const MembraneTrack& mt : c.membranes) {
    const std::int8_t side = mt.sides[i];
    const double xm = mt.x0 + mt.speed * c.span;
    if (side < 0) x = std::min(x, xm);
    else if (side > 0) x = std::max(x, xm);
  }
}

}  // namespace

FlightTally advance(SimState& state, double duration, const AdvanceOptions& options) {
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw DomainError("advance duration must be >= 0");
  const double w = state.geometry.width;
  const double slack = 1e-12 * w;
  for (std::size_t m = 0; m < state.membranes.size(); ++m) {
    const Membrane& mem = state.membranes[m];
    const double end = mem.x + mem.speed * duration;
    if (end < -slack || end > w + slack) {
      throw SimulationError("membrane " + std::to_string(m) + " would leave the box interior (x = " +
                            std::to_string(end) + ")");
    }
  }

  FlightContext c;
  c.width = w;
  c.height = state.geometry.height;
  c.diffuse = state.geometry.side_walls == SideWalls::Diffuse;
  c.has_partition = state.geometry.partition_x.has_value();
  c.partition_x = state.geometry.partition_x.value_or(0.0);
  c.partition_sides = state.partition_sides.data();
  c.span = duration;
  for (std::size_t m = 0; m < state.membranes.size(); ++m) {
    c.membranes.push_back({state.membranes[m].x, state.membranes[m].speed, state.membrane_sides[m].data()});
  }
  const std::size_t n_mem = state.membranes.size();
  c.stride = kFirstMembrane + 2 * n_mem;

  const std::size_t n = state.size();
  std::vector<double> per_particle(n * c.stride, 0.0);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      SplitMix64 rng{state.streams[i]};
      fly(i, state.particles[i], rng, c, per_particle.data() + i * c.stride);
      state.streams[i] = rng.state;
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(n)));
  if (duration > 0.0) {
    if (workers == 1) {
      run_range(0, n);
    } else {
      std::vector<std::exception_ptr> errors(workers);
      {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned k = 0; k < workers; ++k) {
          const std::size_t b = std::min(n, k * chunk);
          const std::size_t e = std::min(n, b + chunk);
          pool.emplace_back([&, b, e, k] {
            try {
              run_range(b, e);
            } catch (...) {
              errors[k] = std::current_exception();
            }
          });
        }
      }
      for (auto& err : errors) {
        if (err) std::rethrow_exception(err);
      }
    }
  }

  // Reduce in particle order so the sums do not depend on the schedule.
  FlightTally out;
  out.duration = duration;
  out.impulses.membranes.assign(n_mem, 0.0);
  out.impulses.membrane_work.assign(n_mem, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = per_particle.data() + i * c.stride;
    for (std::size_t k = 0; k < 4; ++k) out.impulses.walls[k] += row[k];
    out.impulses.partition += row[kPartition];
    for (std::size_t m = 0; m < n_mem; ++m) {
      out.impulses.membranes[m] += row[kFirstMembrane + m];
      out.impulses.membrane_work[m] += row[kFirstMembrane + n_mem + m];
    }
  }

  for (Membrane& mem : state.membranes) mem.x = std::clamp(mem.x + mem.speed * duration, 0.0, w);
  state.time += duration;

  ImpulseTally& total = state.tally;
  for (std::size_t k = 0; k < 4; ++k) total.walls[k] += out.impulses.walls[k];
  total.partition += out.impulses.partition;
  total.membranes.resize(n_mem, 0.0);
  total.membrane_work.resize(n_mem, 0.0);
  for (std::size_t m = 0; m < n_mem; ++m) {
    total.membranes[m] += out.impulses.membranes[m];
    total.membrane_work[m] += out.impulses.membrane_work[m];
  }
  return out;
}

FlightTally advance(SimState& state, double duration, ProcessLedger& ledger, const AdvanceOptions& options) {
  FlightTally t = advance(state, duration, options);
  ledger.work_on_membranes += t.membrane_work();
  return t;
}

}  // namespace gibbs::kinetics
