#include "rotvec/chord.hpp"

#include <cmath>
#include <limits>

#include "rotvec/errors.hpp"
#include "rotvec/parallel.hpp"

namespace rotvec {

nlohmann::json ChordResult::to_json() const {
  nlohmann::json j{{"found", found()}, {"seeds", seeds}, {"seeds_with_chord", seeds_with_chord}};
  if (chord) {
    j["time"] = chord->time;
    j["seed"] = chord->seed;
    j["start"] = chord->start.lift;
    j["end"] = chord->end.lift;
  }
  return j;
}

namespace {

// Level value m crossed when f goes from f0 to f1 (periodic: any integer;
// otherwise only 0), if any.
std::optional<double> crossed_level(double f0, double f1, bool periodic) {
  if (!periodic) {
    if ((f0 < 0.0 && f1 >= 0.0) || (f0 > 0.0 && f1 <= 0.0)) return 0.0;
    return std::nullopt;
  }
  if (f1 > f0) {
    const double m = std::floor(f0) + 1.0;
    if (m <= f1) return m;
  } else if (f1 < f0) {
    const double m = std::ceil(f0) - 1.0;
    if (m >= f1) return m;
  }
  return std::nullopt;
}

}  // namespace

ChordResult chord_search(const ClosedOneForm& alpha, const PhaseSpace& space, const RegionSpec& x,
                         const RegionSpec& x_prime, const ChordOptions& options) {
  if (x_prime.kind() == RegionSpec::Kind::predicate || x_prime.fixed_levels().empty()) {
    throw InvalidArgument("chord search needs X' given by coordinate levels");
  }
  if (!(options.t_max > 0.0) || !(options.h > 0.0)) throw InvalidArgument("chord search needs t_max > 0 and h > 0");
  const VectorField field = VectorField::locally_hamiltonian(space, alpha);
  const CoordinateLevel level = x_prime.fixed_levels().front();
  const bool periodic = space.periodic(level.coord);
  const std::size_t steps = step_count(options.t_max, options.h);
  const double t0 = options.integrate.start_time;

  const auto& seeds = x.grid();
  ChordResult result;
  result.seeds = seeds.size();
  result.seed_times.assign(seeds.size(), std::numeric_limits<double>::infinity());
  std::vector<std::optional<Chord>> found(seeds.size());

  parallel_for(seeds.size(), options.jobs, [&](std::size_t i) {
    FlowStepper stepper(field, options.integrate);
    std::vector<double> cur = seeds[i].lift, next(cur.size()), probe(cur.size());
    for (std::size_t k = 0; k < steps; ++k) {
      const double t = static_cast<double>(k) * options.h;
      const double t_next = k + 1 == steps ? options.t_max : static_cast<double>(k + 1) * options.h;
      const double dt = t_next - t;
      next = cur;
      stepper.step(next, t0 + t, dt);
      const double f0 = cur[level.coord] - level.value;
      const double f1 = next[level.coord] - level.value;
      if (const auto m = crossed_level(f0, f1, periodic)) {
        // g(τ) = f(x(t + τ)) - m changes sign on (0, dt]; bisect it.
        const double s0 = f0 - *m;
        double lo = 0.0, hi = dt;
        while (hi - lo > options.time_tol) {
          const double mid = 0.5 * (lo + hi);
          probe = cur;
          stepper.step(probe, t0 + t, mid);
          const double g = probe[level.coord] - level.value - *m;
          if ((g < 0.0) == (s0 < 0.0) && g != 0.0) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        const double tau = 0.5 * (lo + hi);
        probe = cur;
        stepper.step(probe, t0 + t, tau);
        if (x_prime.level_distance(probe) <= options.level_tol) {
          found[i] = Chord{seeds[i], wrap(probe, space), t + tau, i};
          result.seed_times[i] = t + tau;
          return;
        }
      }
      cur.swap(next);
    }
  });

  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!found[i]) continue;
    ++result.seeds_with_chord;
    if (!result.chord || found[i]->time < result.chord->time) result.chord = found[i];
  }
  return result;
}

}  // namespace rotvec
