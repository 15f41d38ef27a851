#pragma once

// QCA definitions from TOML or JSON files plus the registry of built-in
// examples. The TOML reader covers the subset these configs need: top-level
// `key = value` pairs with strings, integers, booleans, and (nested,
// possibly multiline) arrays; '#' comments.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qca/symplectic.hpp"

namespace qca {

namespace detail {

struct TomlValue {
  std::variant<std::string, long, bool, std::vector<TomlValue>> v;

  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_int() const { return std::holds_alternative<long>(v); }
  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_array() const { return std::holds_alternative<std::vector<TomlValue>>(v); }
  const std::string& str() const { return std::get<std::string>(v); }
  long integer() const { return std::get<long>(v); }
  bool boolean() const { return std::get<bool>(v); }
  const std::vector<TomlValue>& array() const { return std::get<std::vector<TomlValue>>(v); }
};

class TomlParser {
 public:
  explicit TomlParser(std::string_view text) : s_(text) {}

  std::vector<std::pair<std::string, TomlValue>> parse() {
    std::vector<std::pair<std::string, TomlValue>> out;
    while (true) {
      skip_space_and_comments(true);
      if (eof()) break;
      if (s_[pos_] == '[')
        throw parse_error("TOML tables are not supported in QCA configs", pos_);
      std::string key = parse_key();
      skip_space_and_comments(false);
      if (eof() || s_[pos_] != '=') throw parse_error("expected '='", pos_);
      ++pos_;
      skip_space_and_comments(false);
      out.emplace_back(std::move(key), parse_value());
      skip_space_and_comments(false);
      if (!eof() && s_[pos_] != '\n' && s_[pos_] != '\r')
        throw parse_error("expected end of line", pos_);
    }
    return out;
  }

 private:
  std::string parse_key() {
    std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                      s_[pos_] == '_' || s_[pos_] == '-'))
      ++pos_;
    if (pos_ == start) throw parse_error("expected key", pos_);
    return std::string(s_.substr(start, pos_ - start));
  }

  TomlValue parse_value() {
    if (eof()) throw parse_error("expected value", pos_);
    char c = s_[pos_];
    if (c == '"') return parse_string();
    if (c == '[') return parse_array();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+')
      return parse_integer();
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return TomlValue{true};
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return TomlValue{false};
    }
    throw parse_error("expected value", pos_);
  }

  TomlValue parse_string() {
    ++pos_;  // opening quote
    std::string out;
    while (!eof() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') {
        ++pos_;
        if (eof()) break;
        switch (s_[pos_]) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: throw parse_error("unsupported string escape", pos_);
        }
        ++pos_;
        continue;
      }
      out += s_[pos_++];
    }
    if (eof()) throw parse_error("unterminated string", pos_);
    ++pos_;  // closing quote
    return TomlValue{std::move(out)};
  }

  TomlValue parse_integer() {
    std::size_t start = pos_;
    if (s_[pos_] == '-' || s_[pos_] == '+') ++pos_;
    while (!eof() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    try {
      return TomlValue{std::stol(std::string(s_.substr(start, pos_ - start)))};
    } catch (const std::exception&) {
      throw parse_error("bad integer", start);
    }
  }

  TomlValue parse_array() {
    ++pos_;  // '['
    std::vector<TomlValue> items;
    while (true) {
      skip_space_and_comments(true);
      if (eof()) throw parse_error("unterminated array", pos_);
      if (s_[pos_] == ']') {
        ++pos_;
        break;
      }
      items.push_back(parse_value());
      skip_space_and_comments(true);
      if (eof()) throw parse_error("unterminated array", pos_);
      if (s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        break;
      }
      throw parse_error("expected ',' or ']'", pos_);
    }
    return TomlValue{std::move(items)};
  }

  // newlines count as whitespace only where allowed (between top-level
  // pairs and inside arrays)
  void skip_space_and_comments(bool newlines) {
    while (!eof()) {
      char c = s_[pos_];
      if (c == ' ' || c == '\t' || (newlines && (c == '\n' || c == '\r'))) {
        ++pos_;
        continue;
      }
      if (c == '#') {
        while (!eof() && s_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
  }

  bool eof() const { return pos_ >= s_.size(); }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

struct QcaConfig {
  std::string name;
  int dims = 1;
  int qubits_per_cell = 1;
  bool raw_ca = false;  // plain linear CA; pseudo-unitarity not expected
  std::optional<LaurentPoly> palindromic_t;  // set by the `t` shorthand
  PolyMatrix matrix;
  std::vector<std::string> warnings;

  static QcaConfig from_toml_text(std::string_view text);
  static QcaConfig from_json_text(std::string_view text);
  static QcaConfig load(const std::string& path);
  static QcaConfig from_registry(std::string_view name);
  static std::vector<std::string> registry_names();
};

namespace detail {

struct RawConfig {
  std::string name;
  long dims = 1;
  long qubits_per_cell = 1;
  bool raw_ca = false;
  std::optional<std::string> t;
  std::optional<std::vector<std::vector<std::string>>> matrix;
};

inline QcaConfig finish_config(RawConfig raw) {
  if (raw.dims < 1) throw std::invalid_argument("dims must be >= 1");
  if (raw.qubits_per_cell < 1)
    throw std::invalid_argument("qubits_per_cell must be >= 1");
  QcaConfig cfg;
  cfg.name = std::move(raw.name);
  cfg.dims = static_cast<int>(raw.dims);
  cfg.qubits_per_cell = static_cast<int>(raw.qubits_per_cell);
  cfg.raw_ca = raw.raw_ca;

  if (raw.t && raw.matrix)
    throw std::invalid_argument("config sets both t and matrix");
  if (raw.t) {
    if (cfg.dims != 1 || cfg.qubits_per_cell != 1)
      throw std::invalid_argument(
          "the t shorthand describes the 2x2 one-variable family");
    LaurentPoly t = parse_poly(*raw.t, 1);
    PolyMatrix m(2, 1);
    m.at(0, 1) = LaurentPoly::one(1);
    m.at(1, 0) = LaurentPoly::one(1);
    m.at(1, 1) = t;
    cfg.matrix = std::move(m);
    if (t == t.involute())
      cfg.palindromic_t = t;
    else
      cfg.warnings.push_back("t is not palindromic; exact classification and "
                             "pseudo-unitarity do not apply");
  } else {
    if (!raw.matrix) throw std::invalid_argument("config needs t or matrix");
    const auto& rows = *raw.matrix;
    const int size = static_cast<int>(rows.size());
    if (size < 1) throw std::invalid_argument("matrix must be nonempty");
    PolyMatrix m(size, cfg.dims);
    for (int r = 0; r < size; ++r) {
      if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != size)
        throw std::invalid_argument("matrix must be square");
      for (int c = 0; c < size; ++c)
        m.at(r, c) = parse_poly(rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], cfg.dims);
    }
    if (!cfg.raw_ca && size != 2 * cfg.qubits_per_cell)
      throw std::invalid_argument(
          "matrix size must be 2*qubits_per_cell (or set raw_ca = true)");
    cfg.matrix = std::move(m);
  }

  if (!cfg.raw_ca && !is_pseudo_unitary(cfg.matrix))
    cfg.warnings.push_back("matrix is not pseudo-unitary");
  return cfg;
}

}  // namespace detail

inline QcaConfig QcaConfig::from_toml_text(std::string_view text) {
  detail::RawConfig raw;
  for (auto& [key, value] : detail::TomlParser(text).parse()) {
    if (key == "name" && value.is_string()) raw.name = value.str();
    else if (key == "dims" && value.is_int()) raw.dims = value.integer();
    else if (key == "qubits_per_cell" && value.is_int()) raw.qubits_per_cell = value.integer();
    else if (key == "raw_ca" && value.is_bool()) raw.raw_ca = value.boolean();
    else if (key == "t" && value.is_string()) raw.t = value.str();
    else if (key == "matrix" && value.is_array()) {
      std::vector<std::vector<std::string>> rows;
      for (const auto& row : value.array()) {
        if (!row.is_array())
          throw std::invalid_argument("matrix must be an array of arrays");
        std::vector<std::string> cells;
        for (const auto& cell : row.array()) {
          if (!cell.is_string())
            throw std::invalid_argument("matrix entries must be strings");
          cells.push_back(cell.str());
        }
        rows.push_back(std::move(cells));
      }
      raw.matrix = std::move(rows);
    } else {
      throw std::invalid_argument("unknown or mistyped config key: " + key);
    }
  }
  return detail::finish_config(std::move(raw));
}

inline QcaConfig QcaConfig::from_json_text(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text);
  detail::RawConfig raw;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const nlohmann::json& value = it.value();
    if (key == "name" && value.is_string()) raw.name = value.get<std::string>();
    else if (key == "dims" && value.is_number_integer()) raw.dims = value.get<long>();
    else if (key == "qubits_per_cell" && value.is_number_integer()) raw.qubits_per_cell = value.get<long>();
    else if (key == "raw_ca" && value.is_boolean()) raw.raw_ca = value.get<bool>();
    else if (key == "t" && value.is_string()) raw.t = value.get<std::string>();
    else if (key == "matrix" && value.is_array())
      raw.matrix = value.get<std::vector<std::vector<std::string>>>();
    else
      throw std::invalid_argument("unknown or mistyped config key: " + key);
  }
  return detail::finish_config(std::move(raw));
}

inline QcaConfig QcaConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml")
    return from_toml_text(buf.str());
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return from_json_text(buf.str());
  throw std::invalid_argument("config files must end in .toml or .json");
}

inline std::vector<std::string> QcaConfig::registry_names() {
  return {"glider", "fractal", "shift", "f", "g", "double-f", "double-g"};
}

inline QcaConfig QcaConfig::from_registry(std::string_view name) {
  auto family = [](const char* nm, const char* t) {
    QcaConfig cfg;
    cfg.name = nm;
    PolyMatrix m(2, 1);
    m.at(0, 1) = LaurentPoly::one(1);
    m.at(1, 0) = LaurentPoly::one(1);
    m.at(1, 1) = parse_poly(t, 1);
    cfg.matrix = std::move(m);
    cfg.palindromic_t = parse_poly(t, 1);
    return cfg;
  };
  auto raw2 = [](const char* nm, const char* t) {
    QcaConfig cfg;
    cfg.name = nm;
    cfg.raw_ca = true;
    PolyMatrix m(2, 1);
    m.at(0, 1) = LaurentPoly::one(1);
    m.at(1, 0) = LaurentPoly::one(1);
    m.at(1, 1) = parse_poly(t, 1);
    cfg.matrix = std::move(m);
    return cfg;
  };
  if (name == "glider") return family("glider", "u + u^-1");
  if (name == "fractal") return family("fractal", "u + 1 + u^-1");
  if (name == "shift") {
    QcaConfig cfg;
    cfg.name = "shift";
    PolyMatrix m(2, 1);
    m.at(0, 0) = LaurentPoly::monomial1(1);
    m.at(1, 1) = LaurentPoly::monomial1(1);
    cfg.matrix = std::move(m);
    return cfg;
  }
  if (name == "f") return raw2("f", "u");
  if (name == "g") return raw2("g", "1 + u");
  if (name == "double-f" || name == "double-g") {
    QcaConfig base = from_registry(name == "double-f" ? "f" : "g");
    QcaConfig cfg;
    cfg.name = std::string(name);
    cfg.qubits_per_cell = 2;
    cfg.matrix = doubled(base.matrix);
    return cfg;
  }
  throw std::invalid_argument("unknown registry entry '" + std::string(name) +
                              "' (try: glider, fractal, shift, f, g, double-f, double-g)");
}

}  // namespace qca
