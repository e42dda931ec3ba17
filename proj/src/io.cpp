#include "mustring/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mustring {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_quote(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  for (const char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
  return out;
}

std::string json_array(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += g17(v[i]);
  }
  out += ']';
  return out;
}

std::string json_array(const std::vector<int>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  out += ']';
  return out;
}

void JsonRecord::raw(const std::string& key, const std::string& fragment) {
  fields.emplace_back(key, fragment);
}

void JsonRecord::text(const std::string& key, const std::string& s) {
  fields.emplace_back(key, json_quote(s));
}

void JsonRecord::num(const std::string& key, double v) {
  fields.emplace_back(key, g17(v));
}

void JsonRecord::integer(const std::string& key, long long v) {
  fields.emplace_back(key, std::to_string(v));
}

void JsonRecord::boolean(const std::string& key, bool b) {
  fields.emplace_back(key, b ? "true" : "false");
}

std::string JsonRecord::render() const {
  std::string out = "{";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += json_quote(fields[i].first);
    out += ':';
    out += fields[i].second;
  }
  out += '}';
  return out;
}

RunManifest::RunManifest(const std::string& subcommand) {
  fields.integer("schema_version", 1);
  fields.text("subcommand", subcommand);
}

std::string RunManifest::json() const { return fields.render(); }

std::string params_json(const StringParams& p) {
  JsonRecord r;
  r.num("rho", p.rho);
  r.num("gamma", p.gamma);
  r.num("ell", p.ell);
  r.num("m0", p.m0);
  r.num("ml", p.ml);
  r.num("k0", p.k0);
  r.num("kl", p.kl);
  r.num("eps0", p.eps0);
  r.num("epsl", p.epsl);
  return r.render();
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void config_fail(const std::string& origin, int line,
                              const std::string& what) {
  throw ValidationError(origin + " line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& origin, int line, const std::string& key,
                    const std::string& text) {
  if (text.empty()) {
    config_fail(origin, line, "key \"" + key + "\" has no value");
  }
  // Decimal notation only; strtod would also take hex floats and inf/nan,
  // none of which belong in a parameter file.
  const std::size_t digits = text.find_first_not_of("+-");
  if (digits != std::string::npos && text[digits] == '0' &&
      (text.compare(digits, 2, "0x") == 0 || text.compare(digits, 2, "0X") == 0)) {
    config_fail(origin, line, "key \"" + key + "\" is not a decimal number");
  }
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) {
    config_fail(origin, line,
                "cannot parse value \"" + text + "\" for key \"" + key + "\"");
  }
  if (!std::isfinite(v)) {
    config_fail(origin, line, "key \"" + key + "\" must be finite");
  }
  return v;
}

}  // namespace

StringParams parse_config(const std::string& text, const std::string& origin) {
  StringParams p;
  struct Slot {
    const char* key;
    double StringParams::*field;
    bool seen;
  };
  Slot slots[] = {
      {"rho", &StringParams::rho, false},
      {"gamma", &StringParams::gamma, false},
      {"ell", &StringParams::ell, false},
      {"m0", &StringParams::m0, false},
      {"ml", &StringParams::ml, false},
      {"k0", &StringParams::k0, false},
      {"kl", &StringParams::kl, false},
      {"eps0", &StringParams::eps0, false},
      {"epsl", &StringParams::epsl, false},
  };

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trimmed(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      config_fail(origin, lineno, "expected key = value");
    }
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));

    Slot* slot = nullptr;
    for (Slot& s : slots) {
      if (key == s.key) {
        slot = &s;
        break;
      }
    }
    if (!slot) {
      config_fail(origin, lineno, "unknown key \"" + key + "\"");
    }
    if (slot->seen) {
      config_fail(origin, lineno, "duplicate key \"" + key + "\"");
    }
    slot->seen = true;
    p.*(slot->field) = parse_number(origin, lineno, key, value);
  }

  validate(p);
  return p;
}

StringParams load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot read config file " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

void csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].find_first_of(",\"\n\r") != std::string::npos) {
      throw std::logic_error("csv cell needs quoting, which this writer refuses: " + cells[i]);
    }
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace mustring
