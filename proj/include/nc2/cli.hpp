#pragma once

// The nc2 command-line front end. run() is the whole program minus the
// process boundary so tests can drive it with in-memory streams.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nc2/error.hpp"
#include "nc2/netgraph.hpp"
#include "nc2/pipeline.hpp"
#include "nc2/regions.hpp"
#include "nc2/report.hpp"
#include "nc2/verify.hpp"

namespace nc2::cli {

enum ExitCode : int { kOk = 0, kFail = 1, kInputError = 2, kInternalError = 3 };

struct RunConfig {
  std::string command;
  std::string input;
  std::uint64_t seed = 0;
  std::optional<std::uint32_t> q;
  std::size_t trials = 100;
  std::string format = "json";
  std::string json_path;
  std::string svg_path;
  std::string cuts_only;
  std::vector<std::string> points;
  int timeshare = 0;
  int max_denominator = 8;
  bool timing = false;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw Error("cannot write '" + path + "'");
}

inline CutVector parse_cut_list(const std::string& text) {
  std::array<int, 9> v{};
  std::stringstream ss(text);
  std::string tok;
  std::size_t n = 0;
  while (std::getline(ss, tok, ',')) {
    if (n == 9) throw PreconditionError("--cuts-only takes exactly nine values");
    try {
      std::size_t used = 0;
      v[n] = std::stoi(tok, &used);
      if (used != tok.size() || v[n] < 0) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw PreconditionError("--cuts-only: '" + tok + "' is not a nonnegative integer");
    }
    ++n;
  }
  if (n != 9) throw PreconditionError("--cuts-only takes exactly nine values");
  const CutVector cv = CutVector::from_values(v);
  if (!cv.consistent()) throw PreconditionError("--cuts-only: values violate min-cut relations");
  return cv;
}

inline RatePoint parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw PreconditionError("--point expects r1,r2");
  try {
    RatePoint p{Rational(text.substr(0, comma)), Rational(text.substr(comma + 1))};
    if (p.r1 < 0 || p.r2 < 0) throw PreconditionError("--point must be nonnegative");
    return p;
  } catch (const std::runtime_error&) {
    throw PreconditionError("--point: cannot parse '" + text + "'");
  }
}

inline std::string join(const Polygon& p) {
  std::string s;
  for (const auto& v : p.vertices) s += (s.empty() ? "" : " ") + to_string(v);
  return s;
}

inline std::string cuts_table(const CutVector& cv) {
  std::ostringstream os;
  os << "k11 k22 k12 k21 k121 k122 k112 k212 k1212\n";
  const auto v = cv.values();
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  os << '\n';
  return os.str();
}

inline std::string region_table(const RegionReport& rep) {
  std::ostringstream os;
  os << "classification " << to_string(rep.regime) << '\n';
  for (const auto& r : rep.regions) os << (r.comparison_only ? "compare " : "region ") << r.name << ": " << join(r.polygon) << '\n';
  os << "hull: " << join(rep.hull) << '\n';
  for (const auto& v : rep.vertices) {
    os << "vertex " << to_string(v.point);
    if (v.plan) os << ' ' << to_string(v.plan->kind) << ' ' << to_string(v.plan->t1) << '/' << to_string(v.plan->t2);
    os << '\n';
  }
  os << "rank_terms bound " << rep.bound.t1 << ' ' << rep.bound.t2;
  if (rep.achieved) os << " achieved " << rep.achieved->t1 << ' ' << rep.achieved->t2;
  os << '\n';
  for (const auto& f : rep.flags) os << "flag " << f << '\n';
  return os.str();
}

inline std::string code_table(const CodeResult& r) {
  std::ostringstream os;
  const CodedNetwork& c = r.code;
  os << "q " << c.field.q() << " attempts " << r.attempts << '\n';
  for (std::size_t n = 0; n < c.net.edges.size(); ++n) {
    os << 'e' << n << ' ' << c.net.nodes[c.net.edges[n].tail] << "->" << c.net.nodes[c.net.edges[n].head] << " [";
    for (std::size_t i = 0; i < c.global[n].size(); ++i) os << (i ? " " : "") << c.global[n][i];
    os << "]\n";
  }
  return os.str();
}

struct Loaded {
  std::optional<Instance> inst;
  std::optional<Network> net;
  std::optional<CutVector> cuts;  // set for --cuts-only
  ArtifactMeta meta;
};

}  // namespace detail

inline int execute(const RunConfig& cfg, std::ostream& out) {
  detail::Loaded in;
  in.meta.seed = cfg.seed;
  const bool cuts_only = !cfg.cuts_only.empty();
  if (cuts_only) {
    if (cfg.command == "code" || cfg.command == "verify")
      throw PreconditionError("--cuts-only cannot be used with '" + cfg.command + "'");
    in.cuts = detail::parse_cut_list(cfg.cuts_only);
    in.meta.input_hash = hex64(fnv1a64(cfg.cuts_only));
  } else {
    if (cfg.input.empty()) throw PreconditionError("a graph file is required");
    const std::string text = detail::read_file(cfg.input);
    in.meta.input_hash = hex64(fnv1a64(text));
    in.net = parse_network(text);
  }

  Json doc{{"meta", to_json(in.meta)}};
  std::string table;
  int code = kOk;

  auto instance = [&]() -> const Instance& {
    in.inst = build_instance(*in.net, {cfg.seed, cfg.q});
    in.meta.q = in.inst->field().q();
    doc["meta"] = to_json(in.meta);
    return *in.inst;
  };
  auto region = [&]() -> RegionReport {
    if (cuts_only) return achievable_region(*in.cuts);
    return instance().report;
  };

  if (cfg.command == "cuts") {
    const CutVector cv = cuts_only ? *in.cuts : cut_vector(normalize(*in.net));
    doc["cuts"] = to_json(cv);
    table = detail::cuts_table(cv);
  } else if (cfg.command == "region") {
    const RegionReport rep = region();
    doc["region"] = to_json(rep);
    table = detail::region_table(rep);
    if (!cfg.svg_path.empty()) detail::write_file(cfg.svg_path, to_svg(rep));
  } else if (cfg.command == "code") {
    const Instance& inst = instance();
    doc["code"] = to_json(inst.code);
    table = detail::code_table(inst.code);
  } else if (cfg.command == "verify") {
    const Instance& inst = instance();
    if (cfg.timeshare > cfg.max_denominator)
      throw PreconditionError("--timeshare exceeds the denominator cap " + std::to_string(cfg.max_denominator));
    std::vector<RatePoint> targets;
    for (const auto& v : inst.report.vertices) targets.push_back(v.point);
    if (cfg.timeshare > 1) {
      const auto& vs = inst.report.vertices;
      for (std::size_t i = 0; i < vs.size() && vs.size() > 1; ++i) {
        const auto& a = vs[i];
        const auto& b = vs[(i + 1) % vs.size()];
        if (!a.plan || !b.plan) continue;
        for (int w = 1; w < cfg.timeshare; ++w)
          targets.push_back({(a.point.r1 * w + b.point.r1 * (cfg.timeshare - w)) / cfg.timeshare,
                             (a.point.r2 * w + b.point.r2 * (cfg.timeshare - w)) / cfg.timeshare});
      }
    }
    for (const auto& p : cfg.points) targets.push_back(detail::parse_point(p));

    VerifyOptions opt;
    opt.trials = cfg.trials;
    opt.seed = cfg.seed;
    opt.max_denominator = cfg.max_denominator;
    Json reports = Json::array();
    std::ostringstream os;
    bool all = true;
    for (const auto& p : targets) {
      try {
        const VerificationReport r = verify_rate_point(inst, p, opt);
        reports.push_back(to_json(r, cfg.timing));
        all = all && r.pass();
        os << (r.pass() ? "PASS " : "FAIL ") << to_string(p) << ' ' << r.method << ' ' << r.trials << " trials "
           << r.failures << " failures\n";
      } catch (const SolveError& e) {
        reports.push_back(Json{{"point", to_json(p)}, {"result", "FAIL"}, {"error", e.what()}});
        all = false;
        os << "FAIL " << to_string(p) << ' ' << e.what() << '\n';
      }
    }
    doc["pass"] = all;
    doc["reports"] = reports;
    table = os.str();
    code = all ? kOk : kFail;
  } else if (cfg.command == "compare") {
    const RegionReport rep = region();
    const ComparisonReport c = compare_with_ef09(rep);
    std::vector<RatePoint> pts = rep.hull.vertices;
    pts.insert(pts.end(), rep.ef09.vertices.begin(), rep.ef09.vertices.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    Json points = Json::array();
    std::ostringstream os;
    os << "ours: " << detail::join(rep.hull) << "\nef09: " << detail::join(rep.ef09) << '\n';
    for (const auto& p : pts) {
      const bool ours = contains(rep.hull, p), theirs = contains(rep.ef09, p);
      points.push_back(Json{{"point", to_json(p)}, {"in_ours", ours}, {"in_ef09", theirs}});
      os << to_string(p) << " ours=" << (ours ? "yes" : "no") << " ef09=" << (theirs ? "yes" : "no") << '\n';
    }
    doc["cuts"] = to_json(rep.cuts);
    doc["hull"] = to_json(rep.hull);
    doc["ef09"] = to_json(rep.ef09);
    doc["comparison"] = to_json(c);
    doc["points"] = points;
    table = os.str();
    if (!cfg.svg_path.empty()) detail::write_file(cfg.svg_path, to_svg(rep));
  }

  const std::string json = doc.dump(2) + "\n";
  if (!cfg.json_path.empty()) detail::write_file(cfg.json_path, json);
  out << (cfg.format == "table" ? table : json);
  return code;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Two-unicast network coding rate regions", "nc2"};
  app.add_option("command", cfg.command, "cuts | region | code | verify | compare")
      ->required()
      ->check(CLI::IsMember({"cuts", "region", "code", "verify", "compare"}));
  app.add_option("graph", cfg.input, "network description file");
  app.add_option("--seed", cfg.seed, "random seed (default 0)");
  app.add_option("--q", cfg.q, "first field size to try (prime)");
  app.add_option("--trials", cfg.trials, "random trials when exhaustive checking is too large")->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "stdout format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--json", cfg.json_path, "also write the JSON artifact here");
  app.add_option("--svg", cfg.svg_path, "write an SVG plot of the region (region, compare)");
  app.add_option("--cuts-only", cfg.cuts_only, "k11,k22,k12,k21,k121,k122,k112,k212,k1212 instead of a graph");
  app.add_option("--point", cfg.points, "extra rate point r1,r2 to verify (fractions allowed)");
  app.add_option("--timeshare", cfg.timeshare, "verify hull edges at multiples of 1/D")->check(CLI::NonNegativeNumber);
  app.add_option("--max-denominator", cfg.max_denominator, "largest timeshare denominator accepted (default 8)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--timing", cfg.timing, "include elapsed time in verification reports");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "nc2: " << e.what() << '\n';
    return kInputError;
  }
  if (cfg.q && !Field::is_prime(*cfg.q)) {
    err << "nc2: --q " << *cfg.q << " is not prime\n";
    return kInputError;
  }

  try {
    return execute(cfg, out);
  } catch (const LemmaViolation& e) {
    err << "nc2: internal assertion failed: " << e.what() << '\n';
    return kInternalError;
  } catch (const ParseError& e) {
    err << "nc2: " << cfg.input << ": " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "nc2: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "nc2: unexpected error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace nc2::cli
