#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rotvec/geometry.hpp"

namespace rotvec {

// A coordinate pinned to a value, e.g. p1 = 1/2.
struct CoordinateLevel {
  std::size_t coord;
  double value;
};

// Closed subset of phase space together with a finite sample grid on it.
//
// Level regions are intersections of coordinate level sets. On periodic
// coordinates the level is understood mod 1. Their grid samples each free
// coordinate at `per_dim` equispaced points of [0, 1); free non-periodic
// coordinates are not allowed.
class RegionSpec {
 public:
  enum class Kind { momentum_level, product_of_levels, predicate };

  using Predicate = std::function<bool(const PhasePoint&)>;

  // {p = c}, all n momenta pinned.
  static RegionSpec momentum_level(const PhaseSpace& space, std::vector<double> c, std::size_t per_dim = 32);
  static RegionSpec levels(const PhaseSpace& space, std::vector<CoordinateLevel> fixed, std::size_t per_dim = 32);
  static RegionSpec predicate(const PhaseSpace& space, Predicate member, std::vector<PhasePoint> samples,
                              std::string name);
  static RegionSpec empty(const PhaseSpace& space);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  const std::vector<PhasePoint>& grid() const { return grid_; }
  const std::vector<CoordinateLevel>& fixed_levels() const { return fixed_; }
  bool is_empty() const { return grid_.empty(); }

  bool contains(const PhasePoint& x, double tol = 1e-12) const;
  // Largest coordinate residual to the level set (periodic-aware); only for
  // level regions.
  double level_distance(std::span<const double> lift) const;

  nlohmann::json to_json() const;

 private:
  RegionSpec() = default;

  Kind kind_ = Kind::predicate;
  std::string name_;
  std::size_t dim_ = 0;
  std::vector<bool> periodic_;
  std::vector<CoordinateLevel> fixed_;
  Predicate member_;
  std::vector<PhasePoint> grid_;
};

}  // namespace rotvec
