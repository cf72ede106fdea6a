#include "coringlab/report.hpp"

#include <algorithm>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "coringlab/amitsur.hpp"
#include "coringlab/connections.hpp"

namespace coringlab {

namespace {

using OJson = nlohmann::ordered_json;

constexpr Index kMinWidth = 40;
constexpr Index kMaxWidth = 120;

Index clamp_width(Index w) { return std::max(kMinWidth, std::min(kMaxWidth, w)); }

std::string join_indices(const std::vector<Index>& where) {
  std::ostringstream os;
  for (size_t i = 0; i < where.size(); ++i) {
    if (i) os << ", ";
    os << where[i];
  }
  return os.str();
}

std::string join_dims(const std::vector<Index>& dims) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < dims.size(); ++i) {
    if (i) os << ", ";
    os << dims[i];
  }
  os << "]";
  return os.str();
}

// Accumulates the human-readable rendering: dash-padded section headers,
// tagged check lines, and witness details wrapped to the configured width.
class TextSink {
 public:
  explicit TextSink(Index width) : width_(clamp_width(width)) {}

  void section(const std::string& title) {
    std::string line = "-- " + title + " ";
    while (static_cast<Index>(line.size()) < width_) line.push_back('-');
    buf_ += line;
    buf_ += '\n';
  }

  void line(const std::string& s) {
    buf_ += s;
    buf_ += '\n';
  }

  void blank() { buf_ += '\n'; }

  // One wrapped paragraph with a hanging indent.
  void wrapped(const std::string& indent, const std::string& s) {
    const Index avail = std::max<Index>(16, width_ - static_cast<Index>(indent.size()));
    std::istringstream words(s);
    std::string word;
    std::string cur;
    while (words >> word) {
      if (!cur.empty() && static_cast<Index>(cur.size() + 1 + word.size()) > avail) {
        buf_ += indent + cur + "\n";
        cur.clear();
      }
      if (!cur.empty()) cur += ' ';
      cur += word;
    }
    if (!cur.empty()) buf_ += indent + cur + "\n";
  }

  std::string str() const { return buf_; }

 private:
  Index width_;
  std::string buf_;
};

enum class Style { kPassFail, kYesNo };

std::string tag_for(bool pass, Style style) {
  if (style == Style::kYesNo) return pass ? "yes " : "no  ";
  return pass ? "pass" : "FAIL";
}

void render_report(TextSink& out, const CheckReport& rep, Style style) {
  out.line(rep.subject + ":");
  for (const auto& entry : rep.results) {
    out.line("  [" + tag_for(entry.second, style) + "] " + entry.first);
  }
  for (const CheckIssue& issue : rep.issues) {
    std::string head = "witness (" + issue.check + ")";
    if (!issue.where.empty()) head += " at (" + join_indices(issue.where) + ")";
    out.wrapped("      ", head + ": " + issue.detail);
  }
}

OJson report_json(const CheckReport& rep) {
  OJson j;
  j["subject"] = rep.subject;
  j["ok"] = rep.ok();
  OJson checks = OJson::array();
  for (const auto& entry : rep.results) {
    checks.push_back(OJson{{"name", entry.first}, {"ok", entry.second}});
  }
  j["checks"] = std::move(checks);
  OJson issues = OJson::array();
  for (const CheckIssue& issue : rep.issues) {
    issues.push_back(OJson{{"check", issue.check}, {"where", issue.where}, {"detail", issue.detail}});
  }
  j["issues"] = std::move(issues);
  return j;
}

// Body of one command, before the shared header is attached.
struct Body {
  OJson j = OJson::object();
  int code = 0;
  std::string text;
};

CommandResult finish(const std::string& command, const Instance& inst, const Body& body) {
  OJson top;
  top["command"] = command;
  top["instance"] = inst.name;
  top["field"] = inst.field.str();
  top["construction"] = inst.construction;
  top["ok"] = body.code == 0;
  for (const auto& item : body.j.items()) top[item.key()] = item.value();
  CommandResult res;
  res.exit_code = body.code;
  res.text = body.text;
  res.json = top.dump(2) + "\n";
  return res;
}

std::string kind_of(const GrouplikeInfo& info) {
  if (info.grouplike) return "grouplike";
  if (info.semi_grouplike) return "semi-grouplike";
  return "none";
}

// ---------------------------------------------------------------------------
// validate

Body run_validate(const Instance& inst, const ReportOptions& opt) {
  Body body;
  TextSink out(opt.width);
  out.section("validate: " + inst.name);
  out.line("field " + inst.field.str() + ", construction " + inst.construction +
           ", coring dimension " + std::to_string(inst.coring.dim()));

  std::vector<CheckReport> reports;
  reports.push_back(check_algebra_axioms(inst.coring.R));
  if (inst.inclusion.has_value()) {
    reports.push_back(check_algebra_axioms(inst.inclusion->source));
    reports.push_back(check_algebra_map(*inst.inclusion));
  }
  if (inst.entwining.has_value()) reports.push_back(check_coalgebra(*inst.entwining));
  reports.push_back(check_bimodule(inst.coring.C));
  reports.push_back(check_coring_axioms(inst.coring));

  // A zero (or otherwise merely semi-grouplike) element still defines a
  // differential, so validation accepts either kind and records which one.
  const GrouplikeInfo info = verify_grouplike(inst.coring, inst.grouplike);
  CheckReport grp;
  grp.subject = info.report.subject;
  grp.add("comultiplicative", info.report.passed("comultiplicative"));
  grp.add("grouplike or semi-grouplike", info.grouplike || info.semi_grouplike);
  if (!(info.grouplike || info.semi_grouplike)) grp.issues = info.report.issues;
  reports.push_back(grp);

  if (inst.construction_report.has_value()) reports.push_back(*inst.construction_report);

  for (const ModuleEntry& entry : inst.modules) {
    reports.push_back(check_bimodule(entry.module));
    if (entry.coaction_lift.has_value()) {
      const Comodule com =
          make_comodule(entry.name, entry.module, inst.coring, *entry.coaction_lift);
      reports.push_back(check_comodule(inst.coring, com));
    }
  }

  Index failures = 0;
  OJson jreports = OJson::array();
  for (const CheckReport& rep : reports) {
    render_report(out, rep, Style::kPassFail);
    jreports.push_back(report_json(rep));
    for (const auto& entry : rep.results) {
      if (!entry.second) ++failures;
    }
  }
  out.line("grouplike kind: " + kind_of(info));
  out.line(failures == 0 ? "validate: ok"
                         : "validate: FAILED (" + std::to_string(failures) + " failing checks)");

  body.j["coring_dim"] = inst.coring.dim();
  body.j["grouplike_kind"] = kind_of(info);
  body.j["reports"] = std::move(jreports);
  body.code = failures == 0 ? 0 : 1;
  body.text = out.str();
  return body;
}

// ---------------------------------------------------------------------------
// cohomology

Body run_cohomology(const Instance& inst, const ReportOptions& opt) {
  Body body;
  TextSink out(opt.width);
  out.section("cohomology: " + inst.name);

  const Index top_degree = std::max<Index>(0, opt.max_degree);
  const AmitsurContext ctx(inst.coring, inst.grouplike, top_degree + 1);
  std::optional<ReducedContext> rc;
  std::vector<Index> h;
  if (opt.reduced) {
    if (!ctx.grouplike_proper()) {
      body.code = 2;
      body.text = "the reduced complex needs a proper grouplike element; '" + inst.name +
                  "' only carries a semi-grouplike one\n";
      body.j["error"] = "reduced complex unavailable without a proper grouplike element";
      return body;
    }
    rc = reduced_context(ctx);
    h = cohomology(ctx, *rc);
  } else {
    h = cohomology(ctx);
  }
  h.resize(static_cast<size_t>(top_degree) + 1, 0);

  out.line(std::string("complex: ") + (opt.reduced ? "reduced" : "full") + ", degrees 0.." +
           std::to_string(top_degree));
  std::ostringstream head;
  head << "  " << std::setw(6) << "degree" << std::setw(14) << "dim(complex)" << std::setw(10)
       << "dim(H)";
  out.line(head.str());
  OJson rows = OJson::array();
  for (Index n = 0; n <= top_degree; ++n) {
    const Index dim_c = opt.reduced ? rc->dim(n) : ctx.dim(n);
    std::ostringstream row;
    row << "  " << std::setw(6) << n << std::setw(14) << dim_c << std::setw(10)
        << h[static_cast<size_t>(n)];
    out.line(row.str());
    rows.push_back(OJson{{"degree", n}, {"dim_complex", dim_c}, {"dim_h", h[static_cast<size_t>(n)]}});
  }
  out.line("H = " + join_dims(h));

  body.j["reduced"] = opt.reduced;
  body.j["max_degree"] = top_degree;
  body.j["grouplike_proper"] = ctx.grouplike_proper();
  body.j["degrees"] = std::move(rows);
  body.j["h"] = h;
  body.text = out.str();
  return body;
}

// ---------------------------------------------------------------------------
// galois

// Searches for a free S-basis of R among subsets of the standard basis.
std::optional<std::vector<Index>> find_free_basis(const AlgebraMap& incl) {
  const Index dr = incl.target.dim();
  const Index ds = incl.source.dim();
  if (ds <= 0 || dr % ds != 0) return std::nullopt;
  const Index n = dr / ds;
  std::vector<Index> pick(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) pick[static_cast<size_t>(i)] = i;
  while (true) {
    std::vector<Vec> elems;
    elems.reserve(pick.size());
    for (Index i : pick) elems.push_back(incl.target.element(i));
    if (verify_free_basis(incl, elems)) return pick;
    // next lexicographic combination
    Index k = n - 1;
    while (k >= 0 && pick[static_cast<size_t>(k)] == dr - n + k) --k;
    if (k < 0) return std::nullopt;
    ++pick[static_cast<size_t>(k)];
    for (Index j = k + 1; j < n; ++j) {
      pick[static_cast<size_t>(j)] = pick[static_cast<size_t>(j - 1)] + 1;
    }
  }
}

Body run_galois(const Instance& inst, const ReportOptions& opt) {
  Body body;
  TextSink out(opt.width);
  out.section("galois: " + inst.name);

  if (!verify_grouplike(inst.coring, inst.grouplike).grouplike) {
    body.code = 2;
    body.text = "the comparison map needs a proper grouplike element; '" + inst.name +
                "' only carries a semi-grouplike one\n";
    body.j["error"] = "galois analysis unavailable without a proper grouplike element";
    return body;
  }

  const GaloisResult gal = galois_map(inst.coring, inst.grouplike);
  out.line("coinvariants: " + gal.coinv.algebra.name + ", dimension " +
           std::to_string(gal.coinv.algebra.dim()));
  render_report(out, gal.report, Style::kYesNo);
  out.line(std::string("galois: ") + (gal.galois ? "yes" : "no"));

  // Failing to be bijective just means "not Galois"; any other failing entry
  // signals a genuinely ill-formed comparison map.
  bool hard_fail = false;
  for (const auto& entry : gal.report.results) {
    if (entry.first != "bijective" && !entry.second) hard_fail = true;
  }

  body.j["galois"] = gal.galois;
  body.j["coinvariants_dim"] = gal.coinv.algebra.dim();
  OJson jreports = OJson::array();
  jreports.push_back(report_json(gal.report));

  if (!gal.galois) {
    out.line("free basis: skipped");
    out.line("contracting homotopy: skipped");
    out.line("star identity: skipped");
    body.j["free_basis_certified"] = nullptr;
    body.j["free_basis"] = nullptr;
    body.j["homotopy_verified"] = nullptr;
    body.j["star_identity"] = nullptr;
  } else {
    const std::optional<std::vector<Index>> basis = find_free_basis(gal.coinv.inclusion);
    if (basis.has_value()) {
      std::vector<Index> shown = *basis;
      out.line("free basis over the coinvariants: certified, basis indices (" +
               join_indices(shown) + ")");
    } else {
      out.line("free basis over the coinvariants: none found among basis subsets");
    }
    body.j["free_basis_certified"] = basis.has_value();
    if (basis.has_value()) {
      body.j["free_basis"] = *basis;
    } else {
      body.j["free_basis"] = nullptr;
    }

    const AmitsurContext ctx(inst.coring, inst.grouplike,
                             std::max<Index>(2, opt.max_degree + 1));
    const HomotopyResult hom = contracting_homotopy(ctx, gal);
    render_report(out, hom.report, Style::kPassFail);
    const bool hom_ok = hom.report.ok();
    out.line(std::string("contracting homotopy: ") + (hom_ok ? "verified" : "FAILED"));
    body.j["homotopy_verified"] = hom_ok;

    const CheckReport star = verify_star_identity(inst.coring, inst.grouplike, gal);
    render_report(out, star, Style::kPassFail);
    out.line(std::string("star identity: ") + (star.ok() ? "verified" : "FAILED"));
    body.j["star_identity"] = star.ok();

    if (!hom_ok || !star.ok()) hard_fail = true;
  }

  body.j["reports"] = std::move(jreports);
  body.code = hard_fail ? 1 : 0;
  body.text = out.str();
  return body;
}

// ---------------------------------------------------------------------------
// connections

Body run_connections(const Instance& inst, const ReportOptions& opt) {
  Body body;
  TextSink out(opt.width);
  out.section("connections: " + inst.name);

  if (!verify_grouplike(inst.coring, inst.grouplike).grouplike) {
    body.code = 2;
    body.text = "connections need a proper grouplike element; '" + inst.name +
                "' only carries a semi-grouplike one\n";
    body.j["error"] = "connections unavailable without a proper grouplike element";
    return body;
  }
  const AmitsurContext ctx(inst.coring, inst.grouplike, 2);

  std::vector<const ModuleEntry*> selected;
  if (!opt.module_name.empty()) {
    const ModuleEntry* found = inst.find_module(opt.module_name);
    if (found == nullptr) {
      body.code = 2;
      body.text = "unknown module '" + opt.module_name + "' in instance '" + inst.name + "'\n";
      body.j["error"] = "unknown module '" + opt.module_name + "'";
      return body;
    }
    selected.push_back(found);
  } else {
    for (const ModuleEntry& entry : inst.modules) selected.push_back(&entry);
  }

  const ReducedContext rc = reduced_context(ctx);
  const bool cq_applicable = inst.inclusion.has_value() && inst.inclusion->source.dim() == 1;

  OJson jmodules = OJson::array();
  int code = 0;
  if (selected.empty()) out.line("no modules bundled with this instance");
  for (const ModuleEntry* entry : selected) {
    OJson mj;
    mj["name"] = entry->name;
    mj["dim"] = entry->module.dim();
    out.line("module " + entry->name + " (dimension " + std::to_string(entry->module.dim()) +
             "):");

    const std::optional<Connection> con = connection_exists(ctx, rc, entry->module);
    mj["exists"] = con.has_value();
    out.line(std::string("  connection exists: ") + (con.has_value() ? "yes" : "no"));

    const bool proj = is_projective(entry->module);
    mj["projective"] = proj;
    out.line(std::string("  projective: ") + (proj ? "yes" : "no"));

    if (entry->coaction_lift.has_value()) {
      const Comodule com =
          make_comodule(entry->name, entry->module, inst.coring, *entry->coaction_lift);
      const CheckReport crep = check_comodule(inst.coring, com);
      if (!crep.ok()) {
        render_report(out, crep, Style::kPassFail);
        out.line("  flat connection from bundled coaction: FAILED (coaction is not a comodule)");
        mj["flat_if_from_coaction"] = false;
        code = std::max(code, 1);
      } else {
        const Connection cn = coaction_to_connection(ctx, rc, com);
        const bool flat = is_flat(ctx, rc, cn);
        out.line(std::string("  flat connection from bundled coaction: ") +
                 (flat ? "yes" : "NO (unexpected)"));
        mj["flat_if_from_coaction"] = flat;
        if (!flat) code = std::max(code, 1);
      }
    } else {
      out.line("  flat connection from bundled coaction: skipped (no coaction bundled)");
      mj["flat_if_from_coaction"] = nullptr;
    }

    if (cq_applicable) {
      const CuntzQuillen cq = cuntz_quillen_check(inst.coring.R, entry->module);
      out.line(std::string("  existence matches projectivity over the ground field: ") +
               (cq.agree ? "yes" : "NO"));
      mj["cq_agree"] = cq.agree;
      if (!cq.agree || !cq.report.ok()) {
        render_report(out, cq.report, Style::kPassFail);
        code = std::max(code, 1);
      }
    } else {
      out.line(
          "  existence matches projectivity over the ground field: skipped "
          "(no ground-field subalgebra bundled)");
      mj["cq_agree"] = nullptr;
    }
    jmodules.push_back(std::move(mj));
  }

  body.j["modules"] = std::move(jmodules);
  body.code = code;
  body.text = out.str();
  return body;
}

}  // namespace

// ---------------------------------------------------------------------------
// public entry points

CommandResult cmd_validate(const Instance& inst, const ReportOptions& opt) {
  ReportOptions o = opt;
  o.width = clamp_width(opt.width);
  return finish("validate", inst, run_validate(inst, o));
}

CommandResult cmd_cohomology(const Instance& inst, const ReportOptions& opt) {
  ReportOptions o = opt;
  o.width = clamp_width(opt.width);
  return finish("cohomology", inst, run_cohomology(inst, o));
}

CommandResult cmd_galois(const Instance& inst, const ReportOptions& opt) {
  ReportOptions o = opt;
  o.width = clamp_width(opt.width);
  return finish("galois", inst, run_galois(inst, o));
}

CommandResult cmd_connections(const Instance& inst, const ReportOptions& opt) {
  ReportOptions o = opt;
  o.width = clamp_width(opt.width);
  return finish("connections", inst, run_connections(inst, o));
}

CommandResult cmd_report(const Instance& inst, const ReportOptions& opt) {
  ReportOptions o = opt;
  o.width = clamp_width(opt.width);

  Body all;
  // A section that throws (e.g. on an instance whose axioms already fail)
  // aborts with a note instead of discarding the sections before it.
  const auto guarded = [&](const char* key, auto&& fn) {
    try {
      const Body b = fn();
      all.text += b.text;
      all.j[key] = b.j;
      all.code = std::max(all.code, b.code);
    } catch (const Error& e) {
      TextSink t(o.width);
      t.section(std::string(key) + ": " + inst.name);
      t.wrapped("", std::string("aborted: ") + e.what());
      all.text += t.str();
      all.j[key] = OJson{{"error", e.what()}};
      all.code = std::max(all.code, 1);
    }
  };
  const auto skipped = [&](const char* key) {
    TextSink t(o.width);
    t.section(std::string(key) + ": " + inst.name);
    t.line("skipped: the grouplike element is only semi-grouplike");
    all.text += t.str();
    all.j[key] = nullptr;
  };

  guarded("validate", [&] { return run_validate(inst, o); });
  guarded("cohomology", [&] { return run_cohomology(inst, o); });
  // These analyses presuppose a proper grouplike; a composed report notes
  // the omission instead of failing.
  if (verify_grouplike(inst.coring, inst.grouplike).grouplike) {
    guarded("galois", [&] { return run_galois(inst, o); });
    guarded("connections", [&] { return run_connections(inst, o); });
  } else {
    skipped("galois");
    skipped("connections");
  }

  all.text += std::string("report: ") + (all.code == 0 ? "ok" : "FAILED") + "\n";
  return finish("report", inst, all);
}

}  // namespace coringlab
