#pragma once

// Rate-region polygons. Regions are stated as half-planes over the
// nonnegative quadrant and their vertices derived exactly with rational
// arithmetic; the overall region is the convex hull of the constructible
// sub-regions.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nc2/encoders.hpp"
#include "nc2/error.hpp"
#include "nc2/netgraph.hpp"

namespace nc2 {

using Rational = boost::multiprecision::cpp_rational;

struct RatePoint {
  Rational r1{0};
  Rational r2{0};

  RatePoint() = default;
  RatePoint(Rational a, Rational b) : r1(std::move(a)), r2(std::move(b)) {}
  RatePoint(IntPoint p) : r1(p.r1), r2(p.r2) {}  // NOLINT(google-explicit-constructor)

  RatePoint swapped() const { return {r2, r1}; }
  bool integral() const {
    return boost::multiprecision::denominator(r1) == 1 && boost::multiprecision::denominator(r2) == 1;
  }
  IntPoint to_int() const {
    return {static_cast<int>(boost::multiprecision::numerator(r1)), static_cast<int>(boost::multiprecision::numerator(r2))};
  }

  friend bool operator==(const RatePoint& a, const RatePoint& b) { return a.r1 == b.r1 && a.r2 == b.r2; }
  friend bool operator<(const RatePoint& a, const RatePoint& b) {
    return a.r1 < b.r1 || (a.r1 == b.r1 && a.r2 < b.r2);
  }
};

inline std::string to_string(const Rational& r) { return r.str(); }
inline std::string to_string(const RatePoint& p) { return "(" + to_string(p.r1) + ", " + to_string(p.r2) + ")"; }

// a*r1 + b*r2 <= c
struct HalfPlane {
  Rational a, b, c;
};

// Convex polygon, counterclockwise from the lexicographically smallest
// vertex, no three vertices collinear. A single point or a segment is a
// degenerate polygon with one or two vertices.
struct Polygon {
  std::vector<RatePoint> vertices;
  friend bool operator==(const Polygon&, const Polygon&) = default;
};

namespace detail {

inline Rational cross(const RatePoint& o, const RatePoint& a, const RatePoint& b) {
  return (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1);
}

inline Polygon monotone_chain(std::vector<RatePoint> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 1) return {pts};
  std::vector<RatePoint> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = hull.size();
    for (const auto& p : pts) {
      while (hull.size() >= base + 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
      hull.push_back(p);
    }
    hull.pop_back();
    std::reverse(pts.begin(), pts.end());
  }
  return {hull};
}

}  // namespace detail

// Hull of the points after closing them down-left toward the axes.
inline Polygon convex_hull(const std::vector<RatePoint>& points) {
  std::vector<RatePoint> pts{RatePoint{}};
  for (const auto& p : points) {
    if (p.r1 < 0 || p.r2 < 0) throw PreconditionError("rate points must be nonnegative");
    pts.push_back(p);
    pts.push_back({p.r1, Rational(0)});
    pts.push_back({Rational(0), p.r2});
  }
  return detail::monotone_chain(std::move(pts));
}

inline bool contains(const Polygon& poly, const RatePoint& p) {
  const auto& v = poly.vertices;
  if (v.empty()) return false;
  if (v.size() == 1) return v[0] == p;
  if (v.size() == 2) {
    return detail::cross(v[0], v[1], p) == 0 && std::min(v[0].r1, v[1].r1) <= p.r1 &&
           p.r1 <= std::max(v[0].r1, v[1].r1) && std::min(v[0].r2, v[1].r2) <= p.r2 &&
           p.r2 <= std::max(v[0].r2, v[1].r2);
  }
  for (std::size_t i = 0; i < v.size(); ++i)
    if (detail::cross(v[i], v[(i + 1) % v.size()], p) < 0) return false;
  return true;
}

inline bool subset(const Polygon& inner, const Polygon& outer) {
  return std::all_of(inner.vertices.begin(), inner.vertices.end(),
                     [&](const RatePoint& p) { return contains(outer, p); });
}

// Reflection across r1 = r2.
inline Polygon mirror(const Polygon& poly) {
  std::vector<RatePoint> pts;
  for (const auto& p : poly.vertices) pts.push_back(p.swapped());
  return detail::monotone_chain(std::move(pts));
}

// {r1, r2 >= 0} intersected with the half-planes. Must be bounded.
inline Polygon polygon_from_constraints(std::vector<HalfPlane> hs) {
  hs.push_back({Rational(-1), Rational(0), Rational(0)});
  hs.push_back({Rational(0), Rational(-1), Rational(0)});
  auto feasible = [&](const RatePoint& p) {
    return std::all_of(hs.begin(), hs.end(), [&](const HalfPlane& h) { return h.a * p.r1 + h.b * p.r2 <= h.c; });
  };
  std::vector<RatePoint> pts;
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = i + 1; j < hs.size(); ++j) {
      const Rational det = hs[i].a * hs[j].b - hs[i].b * hs[j].a;
      if (det == 0) continue;
      RatePoint p{(hs[i].c * hs[j].b - hs[i].b * hs[j].c) / det, (hs[i].a * hs[j].c - hs[i].c * hs[j].a) / det};
      if (feasible(p)) pts.push_back(std::move(p));
    }
  return detail::monotone_chain(std::move(pts));
}

// {r1 <= x, r2 <= y, r1 + r2 <= s}, bounds clamped at zero.
inline Polygon box_with_sum(Rational x, Rational y, std::optional<Rational> s) {
  std::vector<HalfPlane> hs{{Rational(1), Rational(0), std::max(x, Rational(0))},
                            {Rational(0), Rational(1), std::max(y, Rational(0))}};
  if (s) hs.push_back({Rational(1), Rational(1), std::max(*s, Rational(0))});
  return polygon_from_constraints(std::move(hs));
}

enum class Regime { Low, High };

inline const char* to_string(Regime r) { return r == Regime::Low ? "Low" : "High"; }

// Ties go to Low; both families give the same region there.
inline Regime classify(const CutVector& cv) { return low_interference(cv) ? Regime::Low : Regime::High; }

// Routing region at terminal i, in (rate from s1, rate from s2) coordinates.
inline Polygon terminal_capacity_region(const CutVector& cv, int i) {
  if (i == 1) return box_with_sum(cv.k11, cv.k21, Rational(cv.k121));
  if (i == 2) return box_with_sum(cv.k12, cv.k22, Rational(cv.k122));
  throw PreconditionError("terminal index must be 1 or 2");
}

inline Polygon base_region(const CutVector& cv) {
  return box_with_sum(std::min(cv.k12, cv.k11), std::min(cv.k21, cv.k22), Rational(std::min(cv.k121, cv.k122)));
}

// Comparison region from the edge-disjoint-path scheme; assumes k22 <= k11
// and swaps roles otherwise.
inline Polygon ef09_region(const CutVector& cv) {
  if (cv.k22 <= cv.k11)
    return polygon_from_constraints({{Rational(1), Rational(2), Rational(cv.k11)}, {Rational(0), Rational(1), Rational(cv.k22)}});
  return polygon_from_constraints({{Rational(2), Rational(1), Rational(cv.k22)}, {Rational(1), Rational(0), Rational(cv.k11)}});
}

struct NamedPolygon {
  std::string name;
  Polygon polygon;
  bool comparison_only = false;
};

struct HullVertex {
  RatePoint point;
  std::optional<ConstructionPlan> plan;
};

struct RegionReport {
  CutVector cuts;
  Regime regime = Regime::Low;
  std::vector<NamedPolygon> regions;
  Polygon hull;
  Polygon ef09;
  RankTerms bound;
  std::optional<RankTerms> achieved;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> flags;
  std::vector<HullVertex> vertices;

  RankTerms terms() const { return achieved ? *achieved : bound; }

  const Polygon* find(std::string_view name) const {
    for (const auto& r : regions)
      if (r.name == name) return &r.polygon;
    return nullptr;
  }
};

namespace detail {

inline void add_region(RegionReport& rep, std::string name, Polygon p, bool comparison_only = false) {
  rep.regions.push_back({std::move(name), std::move(p), comparison_only});
}

inline void fill_low(RegionReport& rep) {
  const CutVector& cv = rep.cuts;
  if (cv.k12 > cv.k11 || cv.k21 > cv.k22) throw LemmaViolation("low interference without k12 <= k11, k21 <= k22");
  const RankTerms t = rep.terms();
  if (t.t1 != cv.k121 || t.t2 != cv.k122)
    throw LemmaViolation("low interference rank terms must equal k121 and k122");
  add_region(rep, "region1", box_with_sum(cv.k121 - cv.k21, cv.k122 - cv.k12, std::nullopt));
  add_region(rep, "region2prime", box_with_sum(cv.k11, cv.k21, Rational(cv.k121)));
  add_region(rep, "region3prime", box_with_sum(cv.k12, cv.k22, Rational(cv.k122)));
}

inline void fill_high(RegionReport& rep) {
  const CutVector& cv = rep.cuts;
  const RankTerms t = rep.terms();
  const int sum = std::min(cv.k121, cv.k122);
  const bool r2 = cv.k12 <= cv.k11;
  const bool r3 = cv.k21 <= cv.k22;
  if (r2)
    add_region(rep, "region2", box_with_sum(cv.k11, sum - cv.k12, Rational(t.t1)));
  else
    rep.flags.push_back("region2_inapplicable");
  if (r3)
    add_region(rep, "region3", box_with_sum(sum - cv.k21, cv.k22, Rational(t.t2)));
  else
    rep.flags.push_back("region3_inapplicable");
  if (!r2 && !r3) rep.flags.push_back("extension_inapplicable");
}

}  // namespace detail

// Region report for a cut vector. Without rank terms the sum-rate terms
// fall back to their guaranteed lower bounds. `regime` forces one
// regime (used to cross-check the tie between them).
inline RegionReport achievable_region(const CutVector& cv, std::optional<RankTerms> terms = std::nullopt,
                                      std::optional<Regime> regime = std::nullopt) {
  if (!cv.consistent()) throw PreconditionError("cut vector violates min-cut relations");
  RegionReport rep;
  rep.cuts = cv;
  rep.regime = regime ? *regime : classify(cv);
  rep.bound = rank_term_bounds(cv);
  rep.achieved = terms;
  if (terms && (terms->t1 < rep.bound.t1 || terms->t2 < rep.bound.t2))
    throw LemmaViolation("achieved rank term below its guaranteed lower bound");

  detail::add_region(rep, "C_t1", terminal_capacity_region(cv, 1), true);
  detail::add_region(rep, "C_t2", terminal_capacity_region(cv, 2), true);
  detail::add_region(rep, "base", base_region(cv));
  if (rep.regime == Regime::Low)
    detail::fill_low(rep);
  else
    detail::fill_high(rep);

  std::vector<RatePoint> pts;
  for (const auto& r : rep.regions)
    if (!r.comparison_only) pts.insert(pts.end(), r.polygon.vertices.begin(), r.polygon.vertices.end());
  rep.hull = convex_hull(pts);
  rep.ef09 = ef09_region(cv);

  for (const auto& v : rep.hull.vertices) {
    HullVertex hv{v, std::nullopt};
    if (v.integral()) hv.plan = plan_construction(cv, rep.terms(), v.to_int());
    if (!hv.plan) rep.flags.push_back("vertex_without_construction " + to_string(v));
    rep.vertices.push_back(std::move(hv));
  }
  return rep;
}

struct ComparisonReport {
  std::vector<RatePoint> only_ours;  // hull vertices outside the comparison region
  std::vector<RatePoint> only_ef09;  // comparison vertices outside our hull
};

inline ComparisonReport compare_with_ef09(const RegionReport& rep) {
  ComparisonReport c;
  for (const auto& v : rep.hull.vertices)
    if (!contains(rep.ef09, v)) c.only_ours.push_back(v);
  for (const auto& v : rep.ef09.vertices)
    if (!contains(rep.hull, v)) c.only_ef09.push_back(v);
  return c;
}

}  // namespace nc2
