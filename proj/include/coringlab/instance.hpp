#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coringlab/amitsur.hpp"
#include "coringlab/coring.hpp"

namespace coringlab {

// Raised on malformed instance files; the message names the offending field
// by its dotted path inside the document.
struct ParseError : Error {
  using Error::Error;
};

// A named right R-module bundled with an instance, optionally carrying a
// candidate coaction lift in plain M (x) C coordinates.
struct ModuleEntry {
  std::string name;
  Bimodule module;
  std::optional<Mat> coaction_lift;
};

// A fully constructed problem instance: a coring with a distinguished
// (possibly semi-) grouplike vector, plus any modules the file declares.
struct Instance {
  std::string name;
  Field field;
  std::string construction;  // explicit | trivial | sweedler | entwining | from-dg
  Coring coring;
  Vec grouplike;
  std::optional<AlgebraMap> inclusion;     // S -> R when the file provides one
  std::optional<EntwiningData> entwining;  // retained for entwining instances
  std::optional<Mat> entwining_coaction;   // algebra coaction A -> A (x) C0
  std::optional<CheckReport> construction_report;  // emitted by constructors
  std::vector<ModuleEntry> modules;

  const ModuleEntry* find_module(const std::string& module_name) const;
};

// Parses a JSON document into an Instance.  All scalars are strings in the
// field's own notation ("3/2" over the rationals, "1 mod 2" over GF(2));
// matrices are rectangular nested arrays.  Throws ParseError with the
// offending field path on malformed input.
Instance parse_instance_text(const std::string& text, const std::string& origin);

// Reads and parses the file at `path`; throws ParseError when unreadable.
Instance parse_instance_file(const std::string& path);

}  // namespace coringlab
