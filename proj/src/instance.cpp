#include "coringlab/instance.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace coringlab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError("parse error at " + path + ": " + what);
}

std::string type_name(const json& j) {
  if (j.is_object()) return "object";
  if (j.is_array()) return "array";
  if (j.is_string()) return "string";
  if (j.is_boolean()) return "boolean";
  if (j.is_null()) return "null";
  return "number";
}

const json& member(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.is_object()) fail(path, "expected an object, found " + type_name(obj));
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing field");
  return *it;
}

const json* member_opt(const json& obj, const std::string& key) {
  if (!obj.is_object()) return nullptr;
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object, found " + type_name(obj));
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail(path + "." + item.key(), "unexpected field");
  }
}

std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string, found " + type_name(j));
  return j.get<std::string>();
}

std::string string_or(const json& obj, const std::string& path, const std::string& key,
                      const std::string& fallback) {
  const json* j = member_opt(obj, key);
  return j == nullptr ? fallback : string_at(*j, path + "." + key);
}

Scalar scalar_at(const json& j, const std::string& path, const Field& f) {
  if (j.is_number_integer()) return f.from_long(j.get<long long>());
  if (!j.is_string()) fail(path, "expected a scalar string, found " + type_name(j));
  try {
    return parse_scalar(j.get<std::string>(), f);
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

Vec vec_at(const json& j, const std::string& path, const Field& f, Index len) {
  if (!j.is_array()) fail(path, "expected an array, found " + type_name(j));
  if (len >= 0 && static_cast<Index>(j.size()) != len) {
    fail(path, "expected " + std::to_string(len) + " entries, found " + std::to_string(j.size()));
  }
  Vec out = Vec::Constant(static_cast<Index>(j.size()), f.zero());
  for (Index i = 0; i < out.size(); ++i) {
    out(i) = scalar_at(j[static_cast<size_t>(i)], path + "[" + std::to_string(i) + "]", f);
  }
  return out;
}

Mat mat_at(const json& j, const std::string& path, const Field& f, Index rows, Index cols) {
  if (!j.is_array()) fail(path, "expected an array of rows, found " + type_name(j));
  if (rows >= 0 && static_cast<Index>(j.size()) != rows) {
    fail(path, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
  }
  const Index r = static_cast<Index>(j.size());
  Index c = cols;
  if (c < 0) {
    if (r == 0) fail(path, "cannot infer the width of an empty matrix");
    const json& first = j[0];
    if (!first.is_array()) fail(path + "[0]", "expected an array, found " + type_name(first));
    c = static_cast<Index>(first.size());
  }
  Mat out = Mat::Constant(r, c, f.zero());
  for (Index i = 0; i < r; ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    out.row(i) = vec_at(j[static_cast<size_t>(i)], row_path, f, c).transpose();
  }
  return out;
}

std::vector<std::string> labels_at(const json& obj, const std::string& path, Index dim) {
  const json* j = member_opt(obj, "labels");
  if (j == nullptr) return {};
  if (!j->is_array()) fail(path + ".labels", "expected an array of strings");
  if (static_cast<Index>(j->size()) != dim) {
    fail(path + ".labels",
         "expected " + std::to_string(dim) + " entries, found " + std::to_string(j->size()));
  }
  std::vector<std::string> out;
  for (size_t i = 0; i < j->size(); ++i) {
    out.push_back(string_at((*j)[i], path + ".labels[" + std::to_string(i) + "]"));
  }
  return out;
}

Field field_at(const json& j, const std::string& path) {
  const std::string s = string_at(j, path);
  if (s == "Q" || s == "QQ") return Field::QQ();
  std::string digits;
  if (s.size() > 1 && s[0] == 'F') digits = s.substr(1);
  if (s.size() > 4 && s.rfind("GF(", 0) == 0 && s.back() == ')') {
    digits = s.substr(3, s.size() - 4);
  }
  if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos) {
    try {
      return Field::GF(std::stoll(digits));
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }
  fail(path, "unknown field '" + s + "' (use \"Q\" or \"F<p>\")");
}

// Runs a structure-building step, converting library shape/type complaints
// into parse errors carrying the field path.
template <typename F>
auto build(const std::string& path, F&& step) -> decltype(step()) {
  try {
    return step();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

Algebra algebra_at(const json& obj, const std::string& path, const Field& f,
                   const std::string& default_name) {
  check_keys(obj, path, {"name", "labels", "unit", "mult"});
  const std::string name = string_or(obj, path, "name", default_name);
  const Vec unit = vec_at(member(obj, path, "unit"), path + ".unit", f, -1);
  const Index dim = unit.size();
  if (dim == 0) fail(path + ".unit", "an algebra needs at least one basis element");
  const Mat mult = mat_at(member(obj, path, "mult"), path + ".mult", f, dim, dim * dim);
  FinSpace sp = FinSpace::make(f, dim, labels_at(obj, path, dim));
  return build(path, [&] { return Algebra::make(name, std::move(sp), mult, unit); });
}

ModuleEntry module_at(const json& obj, const std::string& path, const Algebra& r, Index dc) {
  check_keys(obj, path, {"name", "labels", "right_action", "coaction_lift"});
  ModuleEntry out;
  out.name = string_at(member(obj, path, "name"), path + ".name");
  const json& act = member(obj, path, "right_action");
  if (!act.is_array() || act.empty()) {
    fail(path + ".right_action", "expected a nonempty array of rows");
  }
  const Index dim = static_cast<Index>(act.size());
  const Mat action = mat_at(act, path + ".right_action", r.field, dim, dim * r.dim());
  FinSpace sp = FinSpace::make(r.field, dim, labels_at(obj, path, dim));
  out.module = build(path, [&] { return right_module(out.name, r, std::move(sp), action); });
  if (const json* lift = member_opt(obj, "coaction_lift")) {
    out.coaction_lift = mat_at(*lift, path + ".coaction_lift", r.field, dim * dc, dim);
  }
  return out;
}

}  // namespace

const ModuleEntry* Instance::find_module(const std::string& module_name) const {
  for (const ModuleEntry& e : modules) {
    if (e.name == module_name) return &e;
  }
  return nullptr;
}

Instance parse_instance_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError("parse error at " + origin + ": " + e.what());
  }
  if (!root.is_object()) fail(origin, "expected a top-level object");
  check_keys(root, origin,
             {"name", "field", "construction", "algebra", "subalgebra", "coring", "grouplike",
              "entwining", "dg", "modules"});

  Instance inst;
  inst.name = string_or(root, origin, "name", "instance");
  inst.field = field_at(member(root, origin, "field"), origin + ".field");
  inst.construction = string_or(root, origin, "construction", "explicit");
  const Field& f = inst.field;

  const bool known = inst.construction == "explicit" || inst.construction == "trivial" ||
                     inst.construction == "sweedler" || inst.construction == "entwining" ||
                     inst.construction == "from-dg";
  if (!known) {
    fail(origin + ".construction",
         "unknown construction '" + inst.construction +
             "' (use explicit, trivial, sweedler, entwining or from-dg)");
  }
  const auto forbid = [&](const char* key) {
    if (member_opt(root, key) != nullptr) {
      fail(origin + "." + key,
           "unexpected field for construction '" + inst.construction + "'");
    }
  };

  const Algebra r = algebra_at(member(root, origin, "algebra"), origin + ".algebra", f, "R");

  if (inst.construction == "explicit") {
    forbid("subalgebra");
    forbid("entwining");
    forbid("dg");
    const json& cobj = member(root, origin, "coring");
    const std::string cpath = origin + ".coring";
    check_keys(cobj, cpath,
               {"name", "labels", "left_action", "right_action", "delta_lift", "counit"});
    const std::string cname = string_or(cobj, cpath, "name", "C");
    const Mat counit = mat_at(member(cobj, cpath, "counit"), cpath + ".counit", f, r.dim(), -1);
    const Index dc = counit.cols();
    if (dc == 0) fail(cpath + ".counit", "a coring needs at least one basis element");
    const Mat left =
        mat_at(member(cobj, cpath, "left_action"), cpath + ".left_action", f, dc, r.dim() * dc);
    const Mat right =
        mat_at(member(cobj, cpath, "right_action"), cpath + ".right_action", f, dc, dc * r.dim());
    const Mat delta =
        mat_at(member(cobj, cpath, "delta_lift"), cpath + ".delta_lift", f, dc * dc, dc);
    FinSpace csp = FinSpace::make(f, dc, labels_at(cobj, cpath, dc));
    const Bimodule cmod =
        build(cpath, [&] { return Bimodule::make(cname, std::move(csp), r, r, left, right); });
    inst.coring = build(cpath, [&] { return Coring::make(cname, r, cmod, delta, counit); });
    inst.grouplike =
        vec_at(member(root, origin, "grouplike"), origin + ".grouplike", f, dc);
  } else if (inst.construction == "trivial") {
    forbid("subalgebra");
    forbid("entwining");
    forbid("dg");
    forbid("coring");
    forbid("grouplike");
    inst.coring = build(origin + ".algebra", [&] { return trivial_coring(r); });
    inst.grouplike = r.one();
  } else if (inst.construction == "sweedler") {
    forbid("entwining");
    forbid("dg");
    forbid("coring");
    forbid("grouplike");
    const json& sobj = member(root, origin, "subalgebra");
    const std::string spath = origin + ".subalgebra";
    check_keys(sobj, spath, {"name", "labels", "unit", "mult", "inclusion"});
    const std::string sname = string_or(sobj, spath, "name", "S");
    const Vec sunit = vec_at(member(sobj, spath, "unit"), spath + ".unit", f, -1);
    const Index sdim = sunit.size();
    if (sdim == 0) fail(spath + ".unit", "an algebra needs at least one basis element");
    const Mat smult =
        mat_at(member(sobj, spath, "mult"), spath + ".mult", f, sdim, sdim * sdim);
    FinSpace ssp = FinSpace::make(f, sdim, labels_at(sobj, spath, sdim));
    const Algebra s =
        build(spath, [&] { return Algebra::make(sname, std::move(ssp), smult, sunit); });
    const Mat incl =
        mat_at(member(sobj, spath, "inclusion"), spath + ".inclusion", f, r.dim(), s.dim());
    const AlgebraMap map = build(spath, [&] { return AlgebraMap::make(s, r, incl); });
    const SweedlerData sd = build(spath, [&] { return sweedler_coring(r, map); });
    inst.coring = sd.coring;
    inst.grouplike = sd.g;
    inst.inclusion = sd.incl;
  } else if (inst.construction == "entwining") {
    forbid("subalgebra");
    forbid("dg");
    forbid("coring");
    forbid("grouplike");
    const json& eobj = member(root, origin, "entwining");
    const std::string epath = origin + ".entwining";
    check_keys(eobj, epath, {"coalgebra", "psi", "coaction"});
    const json& calg = member(eobj, epath, "coalgebra");
    const std::string capath = epath + ".coalgebra";
    check_keys(calg, capath, {"labels", "delta", "eps"});
    const Mat eps = mat_at(member(calg, capath, "eps"), capath + ".eps", f, 1, -1);
    const Index dc0 = eps.cols();
    if (dc0 == 0) fail(capath + ".eps", "a coalgebra needs at least one basis element");
    const Mat delta0 =
        mat_at(member(calg, capath, "delta"), capath + ".delta", f, dc0 * dc0, dc0);
    const Mat psi = mat_at(member(eobj, epath, "psi"), epath + ".psi", f, r.dim() * dc0,
                           dc0 * r.dim());
    const Mat rho = mat_at(member(eobj, epath, "coaction"), epath + ".coaction", f,
                           r.dim() * dc0, r.dim());
    EntwiningData e{inst.name, r, FinSpace::make(f, dc0, labels_at(calg, capath, dc0)), delta0,
                    eps, psi};
    inst.coring = build(epath, [&] { return entwining_to_coring(e); });
    const EntwinedGrouplike eg =
        build(epath + ".coaction",
              [&] { return grouplike_from_entwined_algebra(e, inst.coring, rho); });
    inst.grouplike = eg.g;
    inst.entwining = std::move(e);
    inst.entwining_coaction = rho;
    inst.construction_report = eg.report;
  } else {  // from-dg
    forbid("subalgebra");
    forbid("entwining");
    forbid("coring");
    forbid("grouplike");
    const json& dobj = member(root, origin, "dg");
    const std::string dpath = origin + ".dg";
    check_keys(dobj, dpath, {"omega1", "d0", "d1_lift"});
    const json& wobj = member(dobj, dpath, "omega1");
    const std::string wpath = dpath + ".omega1";
    check_keys(wobj, wpath, {"name", "labels", "left_action", "right_action"});
    const Mat d0 = mat_at(member(dobj, dpath, "d0"), dpath + ".d0", f, -1, r.dim());
    const Index dw = d0.rows();
    const Mat wleft = mat_at(member(wobj, wpath, "left_action"), wpath + ".left_action", f, dw,
                             r.dim() * dw);
    const Mat wright = mat_at(member(wobj, wpath, "right_action"), wpath + ".right_action", f,
                              dw, dw * r.dim());
    const Mat d1 =
        mat_at(member(dobj, dpath, "d1_lift"), dpath + ".d1_lift", f, dw * dw, dw);
    const std::string wname = string_or(wobj, wpath, "name", "Omega1");
    FinSpace wsp = FinSpace::make(f, dw, labels_at(wobj, wpath, dw));
    const Bimodule omega1 = build(
        wpath, [&] { return Bimodule::make(wname, std::move(wsp), r, r, wleft, wright); });
    const DgCoring dgc =
        build(dpath, [&] { return coring_from_dg(DgInput{r, omega1, d0, d1}); });
    inst.coring = dgc.coring;
    inst.grouplike = dgc.g;
    inst.construction_report = dgc.report;
  }

  if (const json* mods = member_opt(root, "modules")) {
    if (!mods->is_array()) fail(origin + ".modules", "expected an array");
    for (size_t i = 0; i < mods->size(); ++i) {
      const std::string mpath = origin + ".modules[" + std::to_string(i) + "]";
      ModuleEntry entry = module_at((*mods)[i], mpath, inst.coring.R, inst.coring.dim());
      if (inst.find_module(entry.name) != nullptr) {
        fail(mpath + ".name", "duplicate module name '" + entry.name + "'");
      }
      inst.modules.push_back(std::move(entry));
    }
  }
  return inst;
}

Instance parse_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read instance file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance_text(buf.str(), "instance");
}

}  // namespace coringlab
