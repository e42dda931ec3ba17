#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mustring/model.hpp"

namespace mustring {

// Fixed 17 significant digits. Result files want stable text, not the
// shortest round-trip form: every reader recovers the same bits and reruns
// diff byte for byte.
std::string g17(double v);

// JSON string literal with the usual escapes.
std::string json_quote(const std::string& s);

// Rendered JSON arrays for the cell types the outputs use.
std::string json_array(const std::vector<double>& v);
std::string json_array(const std::vector<int>& v);

// Flat JSON object assembled in insertion order. Values are stored as
// rendered fragments, so records nest by passing another record's render().
// Order preservation is what keeps output files reproducible byte for byte.
struct JsonRecord {
  std::vector<std::pair<std::string, std::string>> fields;

  void raw(const std::string& key, const std::string& fragment);
  void text(const std::string& key, const std::string& s);
  void num(const std::string& key, double v);
  void integer(const std::string& key, long long v);
  void boolean(const std::string& key, bool b);
  std::string render() const;
};

// Everything needed to reproduce a run: the subcommand, the resolved
// parameters, each cutoff and tolerance that shaped the result, the seed
// when randomness was involved, and where output went. Rendered as a single
// JSON line and copied verbatim into the header of every file the run
// writes, so a result names the run that produced it.
struct RunManifest {
  JsonRecord fields;

  explicit RunManifest(const std::string& subcommand);
  std::string json() const;
};

// The parameter snapshot embedded in manifests: all nine keys, g17 values.
std::string params_json(const StringParams& p);

// Key = value file with '#' comments, keys exactly the StringParams fields.
// Anything else is rejected by name with its line number, as are duplicates
// and unparseable numbers. Missing keys keep the struct defaults.
StringParams load_config(const std::string& path);

// The same grammar from a string, for tests and generated snippets. origin
// stands in for the file name in error messages.
StringParams parse_config(const std::string& text,
                          const std::string& origin = "config");

// One CSV line: cells joined by commas, newline appended. Cells here are
// plain tokens (numbers, short names); a comma, quote or line break inside
// one would mean the writer is being misused, and throws.
void csv_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace mustring
