#include "rotvec/region.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rotvec/errors.hpp"

namespace rotvec {
namespace {

std::string level_name(const PhaseSpace& space, const std::vector<CoordinateLevel>& fixed) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    const std::size_t c = fixed[i].coord;
    const std::size_t n = space.half_dim();
    os << (i ? ", " : "") << (c < n ? "p" : "q") << (c % n) + 1 << "=" << fixed[i].value;
  }
  os << "}";
  return os.str();
}

}  // namespace

RegionSpec RegionSpec::levels(const PhaseSpace& space, std::vector<CoordinateLevel> fixed, std::size_t per_dim) {
  if (per_dim == 0) throw InvalidArgument("region grid needs at least one point per dimension");
  RegionSpec r;
  r.kind_ = Kind::product_of_levels;
  r.dim_ = space.dim();
  r.periodic_.resize(r.dim_);
  for (std::size_t i = 0; i < r.dim_; ++i) r.periodic_[i] = space.periodic(i);

  std::vector<bool> pinned(r.dim_, false);
  for (const auto& lvl : fixed) {
    if (lvl.coord >= r.dim_) throw DimensionError("level coordinate out of range");
    if (pinned[lvl.coord]) throw InvalidArgument("coordinate pinned twice in region");
    if (!std::isfinite(lvl.value)) throw InvalidPoint("non-finite region level");
    pinned[lvl.coord] = true;
  }
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < r.dim_; ++i) {
    if (pinned[i]) continue;
    if (!r.periodic_[i]) throw InvalidArgument("free non-periodic coordinate cannot be gridded");
    free.push_back(i);
  }
  r.fixed_ = std::move(fixed);
  r.name_ = level_name(space, r.fixed_);

  std::vector<double> base(r.dim_, 0.0);
  for (const auto& lvl : r.fixed_) base[lvl.coord] = lvl.value;
  std::size_t total = 1;
  for (std::size_t f = 0; f < free.size(); ++f) total *= per_dim;
  r.grid_.reserve(total);
  std::vector<std::size_t> idx(free.size(), 0);
  for (std::size_t g = 0; g < total; ++g) {
    std::vector<double> x = base;
    for (std::size_t f = 0; f < free.size(); ++f) {
      x[free[f]] = static_cast<double>(idx[f]) / static_cast<double>(per_dim);
    }
    r.grid_.push_back(wrap(x, space));
    for (std::size_t f = free.size(); f-- > 0;) {
      if (++idx[f] < per_dim) break;
      idx[f] = 0;
    }
  }
  return r;
}

RegionSpec RegionSpec::momentum_level(const PhaseSpace& space, std::vector<double> c, std::size_t per_dim) {
  if (c.size() != space.half_dim()) throw DimensionError("momentum level needs n values");
  std::vector<CoordinateLevel> fixed;
  for (std::size_t i = 0; i < c.size(); ++i) fixed.push_back({p_index(i), c[i]});
  RegionSpec r = levels(space, std::move(fixed), per_dim);
  r.kind_ = Kind::momentum_level;
  return r;
}

RegionSpec RegionSpec::predicate(const PhaseSpace& space, Predicate member, std::vector<PhasePoint> samples,
                                 std::string name) {
  RegionSpec r;
  r.kind_ = Kind::predicate;
  r.dim_ = space.dim();
  r.name_ = std::move(name);
  r.member_ = std::move(member);
  for (const auto& s : samples) {
    if (s.dim() != r.dim_) throw DimensionError("region sample has wrong dimension");
    if (!r.member_(s)) throw InvalidArgument("region sample violates its membership predicate");
  }
  r.grid_ = std::move(samples);
  return r;
}

RegionSpec RegionSpec::empty(const PhaseSpace& space) {
  return predicate(space, [](const PhasePoint&) { return false; }, {}, "{}");
}

double RegionSpec::level_distance(std::span<const double> lift) const {
  if (kind_ == Kind::predicate) throw InvalidArgument("level distance undefined for predicate regions");
  double d = 0.0;
  for (const auto& lvl : fixed_) {
    const double diff = lift[lvl.coord] - lvl.value;
    d = std::max(d, std::abs(periodic_[lvl.coord] ? wrap_centered(diff) : diff));
  }
  return d;
}

bool RegionSpec::contains(const PhasePoint& x, double tol) const {
  if (x.dim() != dim_) throw DimensionError("membership test dimension mismatch");
  if (kind_ == Kind::predicate) return member_ && member_(x);
  return level_distance(x.lift) <= tol;
}

nlohmann::json RegionSpec::to_json() const {
  nlohmann::json j{{"name", name_}, {"grid_points", grid_.size()}};
  if (kind_ != Kind::predicate) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : fixed_) levels.push_back({{"coord", l.coord}, {"value", l.value}});
    j["levels"] = levels;
  }
  return j;
}

}  // namespace rotvec
