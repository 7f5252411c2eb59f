#pragma once

// JSON and SVG serialization of pipeline artifacts. Output depends only on
// the inputs, so identical runs give identical bytes.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "nc2/codegen.hpp"
#include "nc2/encoders.hpp"
#include "nc2/netgraph.hpp"
#include "nc2/regions.hpp"
#include "nc2/verify.hpp"

namespace nc2 {

inline constexpr std::string_view kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct ArtifactMeta {
  std::string input_hash;
  std::uint64_t seed = 0;
  std::optional<std::uint32_t> q;  // absent when no code was built
};

inline Json to_json(const ArtifactMeta& m) {
  return Json{{"tool", "nc2"},
              {"version", kVersion},
              {"input_hash", "fnv1a64:" + m.input_hash},
              {"seed", m.seed},
              {"q", m.q ? Json(*m.q) : Json(nullptr)}};
}

inline Json to_json(const CutVector& cv) {
  static constexpr const char* kNames[] = {"k11", "k22", "k12", "k21", "k121", "k122", "k112", "k212", "k1212"};
  Json j = Json::object();
  const auto v = cv.values();
  for (std::size_t i = 0; i < v.size(); ++i) j[kNames[i]] = v[i];
  return j;
}

inline Json to_json(const RatePoint& p) { return Json::array({to_string(p.r1), to_string(p.r2)}); }

inline Json to_json(const Polygon& poly) {
  Json j = Json::array();
  for (const auto& v : poly.vertices) j.push_back(to_json(v));
  return j;
}

inline Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(Json(std::vector<Element>(m.row(i).begin(), m.row(i).end())));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

inline Json to_json(const EncoderPair& e) {
  return Json{{"M1", to_json(e.m1)}, {"M2", to_json(e.m2)}, {"V1", to_json(e.v1)}, {"V2", to_json(e.v2)}};
}

inline Json to_json(const RankTerms& t) { return Json::array({t.t1, t.t2}); }

inline Json to_json(const ConstructionPlan& p) {
  return Json{{"construction", to_string(p.kind)},
              {"delta", p.delta},
              {"built", Json::array({p.built.r1, p.built.r2})},
              {"t1", to_string(p.t1)},
              {"t2", to_string(p.t2)}};
}

inline Json to_json(const RegionReport& rep) {
  Json regions = Json::object(), comparison = Json::object();
  for (const auto& r : rep.regions) (r.comparison_only ? comparison : regions)[r.name] = to_json(r.polygon);
  comparison["ef09"] = to_json(rep.ef09);
  Json vertices = Json::array();
  for (const auto& v : rep.vertices)
    vertices.push_back(Json{{"point", to_json(v.point)}, {"plan", v.plan ? to_json(*v.plan) : Json(nullptr)}});
  return Json{{"cuts", to_json(rep.cuts)},
              {"classification", to_string(rep.regime)},
              {"regions", regions},
              {"comparison", comparison},
              {"hull", to_json(rep.hull)},
              {"vertices", vertices},
              {"flags", rep.flags},
              {"rank_terms",
               {{"bound", to_json(rep.bound)},
                {"achieved", rep.achieved ? to_json(*rep.achieved) : Json(nullptr)},
                {"seed", rep.seed ? Json(*rep.seed) : Json(nullptr)}}}};
}

inline const char* to_string(CodedNetwork::EdgeKind k) {
  switch (k) {
    case CodedNetwork::EdgeKind::Source1: return "source1";
    case CodedNetwork::EdgeKind::Source2: return "source2";
    case CodedNetwork::EdgeKind::Relay: return "relay";
  }
  return "?";
}

inline Json to_json(const CodeResult& r) {
  const CodedNetwork& c = r.code;
  Json edges = Json::array(), local = Json::object();
  for (std::size_t n = 0; n < c.net.edges.size(); ++n) {
    const auto& g = c.global[n];
    const auto split = g.begin() + static_cast<std::ptrdiff_t>(c.width1);
    edges.push_back(Json{{"index", n},
                         {"tail", c.net.nodes[c.net.edges[n].tail]},
                         {"head", c.net.nodes[c.net.edges[n].head]},
                         {"alpha", std::vector<Element>(g.begin(), split)},
                         {"beta", std::vector<Element>(split, g.end())}});
    local[std::to_string(n)] = Json{{"kind", to_string(c.kind[n])}, {"inputs", c.inputs[n]}, {"coefficients", c.local[n]}};
  }
  return Json{{"q", c.field.q()},
              {"attempts", r.attempts},
              {"code_seed", r.code_seed},
              {"interface", Json::array({c.width1, c.width2})},
              {"edges", edges},
              {"local", local}};
}

inline Json to_json(const TerminalOutcome& t) {
  return Json{{"mode", to_string(t.mode)}, {"joint_rank", t.joint_rank}, {"unintended_undecodable", t.unintended_undecodable}};
}

inline Json to_json(const VerificationReport& r, bool timing = false) {
  Json schedule = Json::array();
  for (const auto& b : r.schedule)
    schedule.push_back(Json{{"rates", Json::array({b.rates.r1, b.rates.r2})},
                            {"construction", to_string(b.construction)},
                            {"t1", to_json(b.t1)},
                            {"t2", to_json(b.t2)},
                            {"encoders", to_json(b.encoders)}});
  Json j{{"point", to_json(r.point)},
         {"result", r.pass() ? "PASS" : "FAIL"},
         {"method", r.method},
         {"trials", r.trials},
         {"failures", r.failures},
         {"q", r.q},
         {"seed", r.seed},
         {"schedule", schedule}};
  if (r.witness)
    j["witness"] = Json{{"trial", r.witness->trial},  {"block", r.witness->block},
                        {"x1", r.witness->x1},        {"x2", r.witness->x2},
                        {"reason", r.witness->reason}, {"encoders", to_json(r.witness->encoders)}};
  if (timing) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

inline Json to_json(const ComparisonReport& c) {
  Json ours = Json::array(), theirs = Json::array();
  for (const auto& p : c.only_ours) ours.push_back(to_json(p));
  for (const auto& p : c.only_ef09) theirs.push_back(to_json(p));
  return Json{{"only_ours", ours}, {"only_ef09", theirs}};
}

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string svg_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace detail

// Axes, the filled hull, each sub-region outlined and the hull vertices
// labeled with their exact coordinates.
inline std::string to_svg(const RegionReport& rep) {
  constexpr double kPlot = 400, kMargin = 60;
  Rational extent(1);
  auto grow = [&](const Polygon& p) {
    for (const auto& v : p.vertices) extent = std::max({extent, v.r1, v.r2});
  };
  for (const auto& r : rep.regions) grow(r.polygon);
  grow(rep.ef09);
  const double scale = kPlot / extent.convert_to<double>();
  auto x = [&](const Rational& r) { return detail::fmt(kMargin + r.convert_to<double>() * scale); };
  auto y = [&](const Rational& r) { return detail::fmt(kMargin + kPlot - r.convert_to<double>() * scale); };
  auto points = [&](const Polygon& p) {
    std::string s;
    for (const auto& v : p.vertices) s += (s.empty() ? "" : " ") + x(v.r1) + "," + y(v.r2);
    return s;
  };

  static constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};
  const double size = kPlot + 2 * kMargin;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
     << size << ' ' << size << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<polygon points=\"" << points(rep.hull) << "\" fill=\"#cfe3f5\" stroke=\"#08306b\" stroke-width=\"2\"/>\n";

  std::size_t colour = 0;
  int legend = 0;
  auto outline = [&](const std::string& name, const Polygon& p, const char* dash) {
    const char* c = kPalette[colour++ % std::size(kPalette)];
    os << "<polygon points=\"" << points(p) << "\" fill=\"none\" stroke=\"" << c << "\" stroke-dasharray=\"" << dash
       << "\"><title>" << detail::svg_escape(name) << "</title></polygon>\n";
    os << "<text x=\"" << detail::fmt(size - kMargin - 90) << "\" y=\"" << detail::fmt(kMargin + 14.0 * legend++)
       << "\" fill=\"" << c << "\">" << detail::svg_escape(name) << "</text>\n";
  };
  for (const auto& r : rep.regions) outline(r.name, r.polygon, r.comparison_only ? "2,4" : "6,3");
  outline("ef09", rep.ef09, "1,3");

  const long long ticks = static_cast<long long>(boost::multiprecision::numerator(extent) /
                                                 boost::multiprecision::denominator(extent));
  os << "<line x1=\"" << x(0) << "\" y1=\"" << y(0) << "\" x2=\"" << x(extent) << "\" y2=\"" << y(0)
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << x(0) << "\" y1=\"" << y(0) << "\" x2=\"" << x(0) << "\" y2=\"" << y(extent)
     << "\" stroke=\"black\"/>\n";
  for (long long t = 0; t <= ticks; ++t) {
    const Rational r(t);
    os << "<text x=\"" << x(r) << "\" y=\"" << detail::fmt(kMargin + kPlot + 18) << "\" text-anchor=\"middle\">" << t
       << "</text>\n";
    os << "<text x=\"" << detail::fmt(kMargin - 10) << "\" y=\"" << y(r) << "\" text-anchor=\"end\">" << t << "</text>\n";
  }
  os << "<text x=\"" << detail::fmt(kMargin + kPlot / 2) << "\" y=\"" << detail::fmt(size - 15)
     << "\" text-anchor=\"middle\">R1</text>\n";
  os << "<text x=\"15\" y=\"" << detail::fmt(kMargin + kPlot / 2) << "\">R2</text>\n";

  for (const auto& v : rep.hull.vertices) {
    os << "<circle cx=\"" << x(v.r1) << "\" cy=\"" << y(v.r2) << "\" r=\"3\" fill=\"#08306b\"/>\n";
    os << "<text x=\"" << detail::fmt(kMargin + v.r1.convert_to<double>() * scale + 5) << "\" y=\""
       << detail::fmt(kMargin + kPlot - v.r2.convert_to<double>() * scale - 5) << "\">" << to_string(v) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace nc2
