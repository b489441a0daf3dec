#include "repro/model_file.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace repro {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& reason) {
  throw Error(ErrorCode::ValidationError, field + ": " + reason);
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) invalid(path + key, "missing");
  return *it;
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) invalid(field, "expected a number");
  return v.get<double>();
}

std::vector<double> number_list(const json& v, const std::string& field) {
  if (!v.is_array()) invalid(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

NonNegMatrix<double> matrix_field(const json& doc, const std::string& key) {
  const json& v = member(doc, key, "");
  if (!v.is_array()) invalid(key, "expected an array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < v.size(); ++i) {
    rows.push_back(number_list(v[i], key + "[" + std::to_string(i) + "]"));
  }
  try {
    return validate_matrix(rows);
  } catch (const Error& e) {
    if (e.row() >= 0) {
      invalid(key + "[" + std::to_string(e.row()) + "][" + std::to_string(e.col()) + "]",
              to_string(e.code()));
    }
    invalid(key, e.what());
  }
}

Tolerances parse_tolerances(const json& doc) {
  Tolerances tol;
  const auto it = doc.find("tolerances");
  if (it == doc.end()) return tol;
  if (!it->is_object()) invalid("tolerances", "expected an object");
  const json& t = *it;
  if (t.contains("tol_eq")) tol.tol_eq = number(t["tol_eq"], "tolerances.tol_eq");
  if (t.contains("tol_spec")) tol.tol_spec = number(t["tol_spec"], "tolerances.tol_spec");
  if (t.contains("tol_split")) tol.tol_split = number(t["tol_split"], "tolerances.tol_split");
  if (t.contains("max_iter")) {
    if (!t["max_iter"].is_number_integer()) invalid("tolerances.max_iter", "expected an integer");
    tol.max_iter = t["max_iter"].get<Index>();
  }
  try {
    tol.validate();
  } catch (const Error&) {
    invalid("tolerances", "values must be positive and max_iter >= 1");
  }
  return tol;
}

SplitSystem<double> parse_split(const json& doc, const Tolerances& tol) {
  auto T = matrix_field(doc, "T");
  auto F = matrix_field(doc, "F");
  try {
    return make_split(std::move(T), std::move(F), tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SubcriticalityViolated) {
      std::ostringstream os;
      os.precision(9);
      os << "r(T) >= 1 (r(T) = " << e.value() << ")";
      invalid("T", os.str());
    }
    if (e.code() == ErrorCode::DimensionMismatch) invalid("F", "dimension differs from T");
    throw;
  }
}

LeslieModel parse_leslie(const json& doc) {
  const json& f = member(doc, "fertility", "");
  const json& s = member(doc, "survival", "");
  if (!f.is_object()) invalid("fertility", "expected an object");
  if (!s.is_object()) invalid("survival", "expected an object");

  Fertility fertility;
  const std::string ftype = member(f, "type", "fertility.").is_string()
                                ? f["type"].get<std::string>()
                                : std::string();
  if (ftype == "finite") {
    fertility = FiniteSupport{number_list(member(f, "values", "fertility."), "fertility.values")};
  } else if (ftype == "geometric") {
    fertility = Geometric{number(member(f, "c", "fertility."), "fertility.c"),
                          number(member(f, "beta", "fertility."), "fertility.beta")};
  } else {
    invalid("fertility.type", "expected \"finite\" or \"geometric\"");
  }

  Survival survival;
  const std::string stype = member(s, "type", "survival.").is_string()
                                ? s["type"].get<std::string>()
                                : std::string();
  if (stype == "constant") {
    survival = ConstantSurvival{number(member(s, "t", "survival."), "survival.t")};
  } else if (stype == "finite_list") {
    survival = FiniteListSurvival{number_list(member(s, "values", "survival."), "survival.values"),
                                  number(member(s, "tail", "survival."), "survival.tail")};
  } else {
    invalid("survival.type", "expected \"constant\" or \"finite_list\"");
  }

  double p = std::numeric_limits<double>::infinity();
  if (const auto it = doc.find("p"); it != doc.end()) {
    if (it->is_string() && it->get<std::string>() == "inf") {
      p = std::numeric_limits<double>::infinity();
    } else {
      p = number(*it, "p");
    }
  }
  try {
    return LeslieModel(std::move(fertility), std::move(survival), p);
  } catch (const Error& e) {
    invalid("leslie", e.what());
  }
}

json matrix_json(const Matrix<double>& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ParsedModel parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) invalid("(root)", "expected a JSON object");
  if (const auto it = doc.find("schema_version"); it != doc.end()) {
    if (!it->is_string() || it->get<std::string>() != "1") {
      invalid("schema_version", "unsupported (expected \"1\")");
    }
  }
  const json& kind = member(doc, "kind", "");
  if (!kind.is_string()) invalid("kind", "expected a string");
  const Tolerances tol = parse_tolerances(doc);
  if (kind == "split") return ParsedModel{parse_split(doc, tol), tol};
  if (kind == "leslie") return ParsedModel{parse_leslie(doc), tol};
  invalid("kind", "expected \"split\" or \"leslie\"");
}

ParsedModel parse_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

json model_to_json(const ParsedModel& pm) {
  json doc;
  doc["schema_version"] = "1";
  if (pm.is_split()) {
    doc["kind"] = "split";
    doc["T"] = matrix_json(pm.split().T().matrix());
    doc["F"] = matrix_json(pm.split().F().matrix());
  } else {
    const auto& m = pm.leslie();
    doc["kind"] = "leslie";
    if (const auto* fs = std::get_if<FiniteSupport>(&m.fertility())) {
      doc["fertility"] = {{"type", "finite"}, {"values", fs->values}};
    } else {
      const auto& g = std::get<Geometric>(m.fertility());
      doc["fertility"] = {{"type", "geometric"}, {"c", g.c}, {"beta", g.beta}};
    }
    if (const auto* cs = std::get_if<ConstantSurvival>(&m.survival())) {
      doc["survival"] = {{"type", "constant"}, {"t", cs->t}};
    } else {
      const auto& l = std::get<FiniteListSurvival>(m.survival());
      doc["survival"] = {{"type", "finite_list"}, {"values", l.values}, {"tail", l.tail}};
    }
    if (std::isinf(m.p())) {
      doc["p"] = "inf";
    } else {
      doc["p"] = m.p();
    }
  }
  doc["tolerances"] = {{"tol_eq", pm.tol.tol_eq},
                       {"tol_spec", pm.tol.tol_spec},
                       {"tol_split", pm.tol.tol_split},
                       {"max_iter", pm.tol.max_iter}};
  return doc;
}

}  // namespace repro
