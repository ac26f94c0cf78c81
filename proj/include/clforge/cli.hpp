#pragma once

// Command-line front end: construct, verify, oracle.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clforge/charsum_oracle.hpp"
#include "clforge/construction.hpp"
#include "clforge/json_util.hpp"
#include "clforge/parallel.hpp"
#include "clforge/quadric_geometry.hpp"
#include "clforge/verification.hpp"

namespace clforge::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

inline constexpr std::uint32_t kOracleMaxQ = 11;
inline const std::vector<std::string> kCheckOrder{"construction", "prelims", "tight",  "charsum",
                                                  "spreads",      "stabilizer", "generators", "oracle"};

struct RunConfig {
  std::string command;
  std::uint32_t p = 0;
  std::uint32_t n = 1;
  std::optional<std::vector<std::uint32_t>> poly;
  std::vector<std::string> checks;
  std::uint64_t spreads = 100;
  std::optional<std::uint64_t> sample;  // unset: per-check default
  bool exhaustive = false;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
  std::string format = "json";
  bool force = false;
  bool timing = true;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::vector<std::uint32_t> parse_poly(const std::string& s) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::logic_error&) {
      throw UsageError("--poly expects comma-separated coefficients, got '" + s + "'");
    }
  }
  if (out.empty()) throw UsageError("--poly is empty");
  return out;
}

/// Expands "all" and aliases; returns the checks in canonical order.
inline std::vector<std::string> resolve_checks(const std::vector<std::string>& requested, std::uint32_t q, bool force) {
  std::set<std::string> want;
  for (std::string c : requested) {
    if (c == "section5") c = "stabilizer";
    if (c == "all") {
      for (const auto& k : kCheckOrder) want.insert(k);
      if (q > 5) want.erase("generators");
      if (q > kOracleMaxQ && !force) want.erase("oracle");
      continue;
    }
    if (std::find(kCheckOrder.begin(), kCheckOrder.end(), c) == kCheckOrder.end())
      throw UsageError("unknown check '" + c + "'");
    want.insert(c);
  }
  if (want.contains("generators") && q > 5) throw UsageError("generator enumeration needs q <= 5");
  if (want.contains("oracle") && q > kOracleMaxQ && !force)
    throw UsageError("oracle is limited to q <= " + std::to_string(kOracleMaxQ) + "; pass --force to override");
  std::vector<std::string> out;
  for (const auto& k : kCheckOrder)
    if (want.contains(k)) out.push_back(k);
  return out;
}

struct Context {
  std::shared_ptr<const FieldCtx> ctx;
  ConstructionModel model;
  LineClassModel lc;
};

inline Context build_context(const RunConfig& cfg) {
  auto ctx = FieldCtx::create(cfg.p, cfg.n, cfg.poly);
  auto model = build_construction(ctx);
  auto lc = build_M(model);
  return {ctx, std::move(model), std::move(lc)};
}

inline std::vector<Report> run_oracle(const Context& c, const RunConfig& cfg) {
  const CharsumOracle oracle(c.model);
  OracleOptions opt;
  opt.exhaustive = cfg.exhaustive || (!cfg.sample && c.ctx->q() <= 5);
  opt.sample = cfg.sample.value_or(500);
  opt.seed = cfg.seed;
  const auto D = build_D(c.model);
  return {check_gauss_identities(c.model, oracle), check_pair_identities(c.model, c.lc, D, oracle, opt),
          check_coset_identities(c.model)};
}

inline std::vector<Report> run_checks(const Context& c, const RunConfig& cfg, const std::vector<std::string>& checks) {
  std::vector<Report> out;
  const auto has = [&](const char* k) { return std::find(checks.begin(), checks.end(), k) != checks.end(); };
  for (const auto& k : checks) {
    if (k == "construction") {
      out.push_back(verify_construction(c.model, c.lc));
    } else if (k == "prelims") {
      out.push_back(verify_prelims(*c.ctx, 1000, cfg.seed));
    } else if (k == "tight") {
      out.push_back(verify_tight_set(c.model, c.lc, cfg.threads));
    } else if (k == "charsum") {
      CharCheckOptions opt;
      opt.exhaustive = cfg.exhaustive || (!cfg.sample && c.ctx->q() <= 5);
      opt.sample = cfg.sample.value_or(10000);
      opt.seed = cfg.seed;
      opt.threads = cfg.threads;
      out.push_back(verify_char_values_exact(c.model, c.lc, build_D(c.model), opt));
    } else if (k == "spreads") {
      out.push_back(verify_spreads(c.model, c.lc, cfg.spreads, cfg.seed));
    } else if (k == "stabilizer" || (k == "generators" && !has("stabilizer"))) {
      out.push_back(verify_stabilizer(c.model, c.lc, has("generators")));
    } else if (k == "oracle") {
      for (auto& r : run_oracle(c, cfg)) out.push_back(std::move(r));
    }
  }
  return out;
}

inline json config_json(const RunConfig& cfg, const std::vector<std::string>& checks) {
  json j;
  j["command"] = cfg.command;
  if (!checks.empty()) j["checks"] = checks;
  j["seed"] = cfg.seed;
  j["sample"] = cfg.exhaustive ? json("exhaustive") : cfg.sample ? json(*cfg.sample) : json("default");
  j["spreads"] = cfg.spreads;
  j["threads"] = cfg.threads;
  return j;
}

inline std::string bundle_text(const FieldCtx& ctx, const RunConfig& cfg, const std::vector<std::string>& checks,
                               const std::vector<Report>& reports) {
  bool pass = true;
  for (const auto& r : reports) pass = pass && r.pass;
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "# clforge " << cfg.command << " p=" << ctx.p() << " n=" << ctx.n() << " q=" << ctx.q()
       << " seed=" << cfg.seed << "\n";
    os << "check,q,pass,violations" << (cfg.timing ? ",elapsed_ms" : "") << "\n";
    for (const auto& r : reports) {
      os << r.check << "," << r.q << "," << (r.pass ? "true" : "false") << "," << r.violations;
      if (cfg.timing) os << "," << r.elapsed_ms;
      os << "\n";
    }
    return os.str();
  }
  json j;
  j["tool"] = "clforge";
  j["field"] = field_json(ctx);
  j["config"] = config_json(cfg, checks);
  j["pass"] = pass;
  j["reports"] = json::array();
  for (const auto& r : reports) j["reports"].push_back(r.to_json(cfg.timing));
  return j.dump(2) + "\n";
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::ios_base::failure("write failed for " + path.string());
}

inline int emit_reports(const Context& c, const RunConfig& cfg, const std::vector<std::string>& checks,
                        const std::vector<Report>& reports, std::ostream& out) {
  const std::string text = bundle_text(*c.ctx, cfg, checks, reports);
  bool pass = true;
  for (const auto& r : reports) pass = pass && r.pass;
  if (cfg.out.empty()) {
    out << text;
  } else {
    write_file(cfg.out, text);
    for (const auto& r : reports) out << (r.pass ? "PASS " : "FAIL ") << r.check << " violations=" << r.violations << "\n";
  }
  return pass ? kPass : kFail;
}

// ---- construct exports ----

inline std::string csv_header(const FieldCtx& ctx, const std::string& what) {
  std::ostringstream os;
  os << "# clforge construct: " << what << "\n";
  os << "# p=" << ctx.p() << " n=" << ctx.n() << " q=" << ctx.q() << "\n";
  os << "# F_{q^3} = F_p[t]/(f), f coefficients (low to high): " << json(ctx.ext_poly()).dump() << "\n";
  os << "# F_q minimal polynomial of w^N over F_p: " << json(ctx.base_poly()).dump() << "\n";
  os << "# primitive element w: index " << ctx.primitive().v << "\n";
  os << "# elements are written as polynomial indices sum c_i p^i; log is base w (F_{q^3}) or w^N (F_q)\n";
  return os.str();
}

struct LineExport {
  std::uint64_t point;
  PluckerLine line;
};

inline std::vector<LineExport> plucker_lines(const FieldCtx& ctx, const LineClassModel& lc) {
  const PluckerIsometry iso(ctx);
  std::vector<LineExport> out;
  out.reserve(lc.points.size());
  for (std::uint64_t code : lc.points)
    out.push_back({code, plucker_to_line(ctx, iso.apply(ctx, point_from_code(ctx, code)))});
  return out;
}

inline void export_construction(const Context& c, const RunConfig& cfg) {
  const FieldCtx& ctx = *c.ctx;
  const auto lines = plucker_lines(ctx, c.lc);
  const std::filesystem::path dir(cfg.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::ios_base::failure("cannot create " + dir.string() + ": " + ec.message());

  if (cfg.format == "json") {
    json j;
    j["tool"] = "clforge";
    j["field"] = field_json(ctx);
    j["x"] = c.model.x_param;
    j["E"] = json::array();
    for (ExtElem e : c.model.E) j["E"].push_back(elem_json(ctx, e));
    j["L"] = json::array();
    for (std::size_t i = 0; i < c.model.L0.size(); ++i) {
      json row;
      row["x"] = elem_json(ctx, c.model.L0[i]);
      row["L_x"] = json::array();
      for (BaseElem b : c.model.Lx[i]) row["L_x"].push_back(base_json(ctx, b));
      j["L"].push_back(row);
    }
    j["M"]["orbit_reps"] = json::array();
    for (ExtElem z : c.model.E) j["M"]["orbit_reps"].push_back({{"x", elem_json(ctx, ExtElem{1})}, {"y", elem_json(ctx, z)}});
    j["M"]["points"] = json::array();
    for (std::uint64_t code : c.lc.points) j["M"]["points"].push_back(point_json(ctx, code));
    j["lines"] = json::array();
    for (const auto& le : lines)
      j["lines"].push_back({{"point", point_json(ctx, le.point)},
                            {"plucker", index_list(le.line.coords)},
                            {"pt1", index_list(le.line.pt1)},
                            {"pt2", index_list(le.line.pt2)}});
    write_file(dir / "construction.json", j.dump(2) + "\n");
    return;
  }

  std::ostringstream e;
  e << csv_header(ctx, "the set E") << "index,log\n";
  for (ExtElem x : c.model.E) e << x.v << "," << ctx.log(x) << "\n";
  write_file(dir / "E.csv", e.str());

  std::ostringstream l;
  l << csv_header(ctx, "L_x for x in L0") << "x_index,x_log,lx_index,lx_log\n";
  for (std::size_t i = 0; i < c.model.L0.size(); ++i)
    for (BaseElem b : c.model.Lx[i])
      l << c.model.L0[i].v << "," << ctx.log(c.model.L0[i]) << "," << b.v << "," << ctx.log(b) << "\n";
  write_file(dir / "Lx.csv", l.str());

  std::ostringstream r;
  r << csv_header(ctx, "orbit representatives (1, z), z in E, of M under C0") << "x_index,y_index\n";
  for (ExtElem z : c.model.E) r << 1 << "," << z.v << "\n";
  write_file(dir / "M_reps.csv", r.str());

  std::ostringstream m;
  m << csv_header(ctx, "points of M in PG(5, q), F_q coordinates of (x, y) over the basis 1, w, w^2")
    << "c0,c1,c2,c3,c4,c5\n";
  for (std::uint64_t code : c.lc.points) {
    const auto v = unpack(ctx, code, 6);
    for (std::size_t i = 0; i < 6; ++i) m << (i ? "," : "") << v[i].v;
    m << "\n";
  }
  write_file(dir / "M_points.csv", m.str());

  std::ostringstream s;
  s << csv_header(ctx, "lines of PG(3, q) of the line class") << "p01,p02,p03,p23,p31,p12,pt1_0,pt1_1,pt1_2,pt1_3,pt2_0,pt2_1,pt2_2,pt2_3\n";
  for (const auto& le : lines) {
    bool first = true;
    auto put = [&](BaseElem b) {
      s << (first ? "" : ",") << b.v;
      first = false;
    };
    for (BaseElem b : le.line.coords) put(b);
    for (BaseElem b : le.line.pt1) put(b);
    for (BaseElem b : le.line.pt2) put(b);
    s << "\n";
  }
  write_file(dir / "lines.csv", s.str());
}

/// p^n saturated at 2^32, for guards that run before the field is built.
inline std::uint32_t ipow_q(const RunConfig& cfg) {
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < cfg.n && q < (1ull << 32); ++i) q *= cfg.p;
  return static_cast<std::uint32_t>(std::min<std::uint64_t>(q, 0xffffffffu));
}

inline int cmd_construct(const RunConfig& cfg, std::ostream& out) {
  const Context c = build_context(cfg);
  const auto lines = plucker_lines(*c.ctx, c.lc);
  out << "q=" << c.ctx->q() << " x=" << c.model.x_param << " |E|=" << c.model.E.size() << " |M|=" << c.lc.points.size()
      << " lines=" << lines.size() << "\n";
  if (!cfg.out.empty()) export_construction(c, cfg);
  return kPass;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto checks = resolve_checks(cfg.checks, ipow_q(cfg), cfg.force);
  const Context c = build_context(cfg);
  return emit_reports(c, cfg, checks, run_checks(c, cfg, checks), out);
}

inline int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const auto checks = resolve_checks({"oracle"}, ipow_q(cfg), cfg.force);
  const Context c = build_context(cfg);
  return emit_reports(c, cfg, checks, run_oracle(c, cfg), out);
}

/// Parses argv and runs one subcommand. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Cameron-Liebler line class construction and verification"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.threads = default_threads();
  std::string poly, sample, checks = "all";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "characteristic")->required();
    sub->add_option("--n", cfg.n, "extension degree, q = p^n")->capture_default_str();
    sub->add_option("--poly", poly, "coefficients over F_p (low to high) of the degree-3n polynomial for F_{q^3}");
    sub->add_option("--out", cfg.out, "output file (verify, oracle) or directory (construct)");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--seed", cfg.seed, "PRNG seed")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "worker threads (default CLFORGE_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--no-timing", [&](std::int64_t) { cfg.timing = false; }, "omit elapsed_ms from reports");
  };
  auto sampling = [&](CLI::App* sub) {
    sub->add_option("--sample", sample, "number of random (a, b) pairs, or 'exhaustive'");
    sub->add_flag("--force", cfg.force, "lift the q <= 11 oracle limit");
  };

  CLI::App* construct = app.add_subcommand("construct", "build E, L_x, M and the line list");
  common(construct);
  CLI::App* verify = app.add_subcommand("verify", "run verification checks");
  common(verify);
  sampling(verify);
  verify->add_option("--checks", checks,
                     "comma list of construction,prelims,tight,charsum,spreads,stabilizer,generators,oracle or all")
      ->capture_default_str();
  verify->add_option("--spreads", cfg.spreads, "number of random spread images")->capture_default_str();
  CLI::App* oracle = app.add_subcommand("oracle", "run the floating-point Gauss-sum cross-checks");
  common(oracle);
  sampling(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (!poly.empty()) cfg.poly = parse_poly(poly);
    if (!sample.empty()) {
      if (sample == "exhaustive") {
        cfg.exhaustive = true;
      } else {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
          v = std::stoull(sample, &used);
        } catch (const std::logic_error&) {
          used = 0;
        }
        if (used != sample.size() || v == 0) throw UsageError("--sample expects a positive integer or 'exhaustive'");
        cfg.sample = v;
      }
    }
    std::stringstream ss(checks);
    for (std::string tok; std::getline(ss, tok, ',');)
      if (!tok.empty()) cfg.checks.push_back(tok);
    if (cfg.checks.empty()) throw UsageError("--checks is empty");

    if (cfg.command == "construct") return cmd_construct(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    return cmd_oracle(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::UnsupportedParameter:
      case ErrorCode::BadPolynomial:
      case ErrorCode::TooLarge:
        return kUsage;
      default:
        return kFail;
    }
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace clforge::cli
