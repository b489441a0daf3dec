#pragma once

// JSON model files:
//
//   {"schema_version": "1", "kind": "split",
//    "T": [[...], ...], "F": [[...], ...],
//    "tolerances": {"tol_eq": 1e-9, "tol_spec": 1e-10, "tol_split": 1e-8,
//                   "max_iter": 100000}}
//
//   {"schema_version": "1", "kind": "leslie",
//    "fertility": {"type": "finite", "values": [...]}
//               | {"type": "geometric", "c": 0.5, "beta": 0.5},
//    "survival": {"type": "constant", "t": 0.5}
//              | {"type": "finite_list", "values": [...], "tail": 0.3},
//    "p": 2 | "inf"}
//
// schema_version defaults to "1", tolerances to the library defaults and p to
// "inf". Unknown keys are ignored, so result documents that embed the model
// parse as models again.

#include "repro/core.hpp"
#include "repro/leslie.hpp"
#include "repro/split.hpp"

#include <json.hpp>

#include <string>
#include <variant>

namespace repro {

struct ParsedModel {
  std::variant<SplitSystem<double>, LeslieModel> model;
  Tolerances tol;

  bool is_split() const { return std::holds_alternative<SplitSystem<double>>(model); }
  const SplitSystem<double>& split() const { return std::get<SplitSystem<double>>(model); }
  const LeslieModel& leslie() const { return std::get<LeslieModel>(model); }
};

/// Throws ParseError for malformed JSON and ValidationError("<field>: <reason>")
/// for anything that does not describe a valid model.
ParsedModel parse_model(const std::string& text);
ParsedModel parse_model_file(const std::string& path);

/// The model part of a model file (kind, matrices or sequences, tolerances).
nlohmann::json model_to_json(const ParsedModel& model);

}  // namespace repro
