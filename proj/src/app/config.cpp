// Reader for the small TOML subset used by job files: [table] headers,
// `key = value` with integers, booleans, "strings" and (possibly
// multi-line) arrays of strings or integers. `#` starts a comment.

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>
#include <vector>

#include "locsys/app.hpp"
#include "locsys/errors.hpp"
#include "locsys/ring.hpp"

namespace locsys::app {

namespace {

struct Located {
  std::size_t line = 0;
  std::size_t column = 0;
};

struct StringItem {
  std::string text;
  Located where;  // position of the first character inside the quotes
};

using Value = std::variant<std::int64_t, bool, std::string, std::vector<StringItem>,
                           std::vector<std::int64_t>>;

struct Entry {
  Value value;
  Located where;
};

using Table = std::map<std::string, Entry>;

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::map<std::string, Table> parse() {
    std::map<std::string, Table> tables;
    std::string current;
    while (!at_end()) {
      skip_blank();
      if (at_end()) break;
      const char c = peek();
      if (c == '\n') {
        advance();
        continue;
      }
      if (c == '#') {
        skip_comment();
        continue;
      }
      if (c == '[') {
        advance();
        skip_inline_space();
        current = read_key();
        skip_inline_space();
        expect(']');
        if (tables.contains(current)) fail("duplicate table [" + current + "]");
        tables[current];
        end_of_line();
        continue;
      }
      const Located where = here();
      const std::string key = read_key();
      skip_inline_space();
      expect('=');
      skip_inline_space();
      Entry e{read_value(), where};
      auto& table = tables[current];
      if (table.contains(key)) fail_at(where, "duplicate key '" + key + "'");
      table.emplace(key, std::move(e));
      end_of_line();
    }
    return tables;
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(here(), msg); }

  [[noreturn]] static void fail_at(Located where, const std::string& msg) {
    throw ParseError("line " + std::to_string(where.line) + ", column " +
                         std::to_string(where.column) + ": " + msg,
                     where.line, where.column);
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  Located here() const { return {line_, pos_ - line_start_ + 1}; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }

  void skip_inline_space() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }
  void skip_blank() { skip_inline_space(); }
  void skip_comment() {
    while (!at_end() && peek() != '\n') advance();
  }
  // Whitespace, newlines and comments, used inside arrays.
  void skip_any_space() {
    while (!at_end()) {
      if (std::isspace(static_cast<unsigned char>(peek()))) {
        advance();
      } else if (peek() == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  void end_of_line() {
    skip_inline_space();
    if (at_end()) return;
    if (peek() == '#') {
      skip_comment();
      return;
    }
    if (peek() != '\n') fail("unexpected trailing characters");
    advance();
  }

  std::string read_key() {
    std::string key;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                         peek() == '-')) {
      key += peek();
      advance();
    }
    if (key.empty()) fail("expected a key");
    return key;
  }

  StringItem read_string() {
    expect('"');
    StringItem item{{}, here()};
    while (!at_end() && peek() != '"') {
      if (peek() == '\n') fail("unterminated string");
      if (peek() == '\\') {
        advance();
        if (at_end()) break;
        const char esc = peek();
        item.text += esc == 'n' ? '\n' : esc == 't' ? '\t' : esc;
        advance();
        continue;
      }
      item.text += peek();
      advance();
    }
    expect('"');
    return item;
  }

  std::int64_t read_integer() {
    const Located where = here();
    std::string digits;
    if (!at_end() && (peek() == '-' || peek() == '+')) {
      digits += peek();
      advance();
    }
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_')) {
      if (peek() != '_') digits += peek();
      advance();
    }
    if (digits.empty() || digits == "-" || digits == "+") fail_at(where, "expected a value");
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(digits.c_str(), &end, 10);
    if (errno != 0 || *end != '\0') fail_at(where, "integer out of range");
    return v;
  }

  Value read_value() {
    if (at_end()) fail("expected a value");
    const char c = peek();
    if (c == '"') return read_string().text;
    if (c == '[') return read_array();
    if (text_.substr(pos_, 4) == "true") {
      for (int i = 0; i < 4; ++i) advance();
      return true;
    }
    if (text_.substr(pos_, 5) == "false") {
      for (int i = 0; i < 5; ++i) advance();
      return false;
    }
    return read_integer();
  }

  Value read_array() {
    expect('[');
    std::vector<StringItem> strings;
    std::vector<std::int64_t> ints;
    while (true) {
      skip_any_space();
      if (at_end()) fail("unterminated array");
      if (peek() == ']') {
        advance();
        break;
      }
      if (peek() == '"') {
        if (!ints.empty()) fail("mixed array element types");
        strings.push_back(read_string());
      } else {
        if (!strings.empty()) fail("mixed array element types");
        ints.push_back(read_integer());
      }
      skip_any_space();
      if (!at_end() && peek() == ',') {
        advance();
        continue;
      }
      skip_any_space();
      if (at_end() || peek() != ']') fail("expected ',' or ']' in array");
    }
    if (!ints.empty()) return ints;
    return strings;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
};

const Entry& require(const std::map<std::string, Table>& tables, const std::string& table,
                     const std::string& key) {
  const auto t = tables.find(table);
  if (t == tables.end()) throw ParseError("missing table [" + table + "]", 0, 0);
  const auto e = t->second.find(key);
  if (e == t->second.end()) {
    throw ParseError("missing key '" + key + "' in [" + table + "]", 0, 0);
  }
  return e->second;
}

const Entry* optional_entry(const std::map<std::string, Table>& tables, const std::string& table,
                            const std::string& key) {
  const auto t = tables.find(table);
  if (t == tables.end()) return nullptr;
  const auto e = t->second.find(key);
  return e == t->second.end() ? nullptr : &e->second;
}

std::int64_t as_int(const Entry& e, const std::string& key, std::int64_t lo) {
  const auto* v = std::get_if<std::int64_t>(&e.value);
  if (!v) Reader::fail_at(e.where, "'" + key + "' must be an integer");
  if (*v < lo) Reader::fail_at(e.where, "'" + key + "' must be >= " + std::to_string(lo));
  return *v;
}

std::vector<StringItem> as_strings(const Entry& e, const std::string& key) {
  if (const auto* v = std::get_if<std::vector<StringItem>>(&e.value)) return *v;
  if (const auto* ints = std::get_if<std::vector<std::int64_t>>(&e.value); ints && ints->empty()) {
    return {};
  }
  Reader::fail_at(e.where, "'" + key + "' must be an array of strings");
}

}  // namespace

JobConfig parse_config(std::string_view text) {
  const auto tables = Reader(text).parse();

  JobConfig cfg;
  const auto generators = as_strings(require(tables, "group", "generators"), "generators");
  if (generators.empty()) {
    Reader::fail_at(require(tables, "group", "generators").where,
                    "at least one generator is required");
  }
  std::vector<std::string> names;
  for (const auto& g : generators) {
    if (g.text.empty() || g.text.find_first_of(" \t^") != std::string::npos) {
      Reader::fail_at(g.where, "invalid generator name '" + g.text + "'");
    }
    names.push_back(g.text);
  }

  std::vector<Word> relators;
  if (const Entry* rel = optional_entry(tables, "group", "relators")) {
    std::size_t index = 0;
    for (const auto& item : as_strings(*rel, "relators")) {
      ++index;
      try {
        relators.push_back(parse_word(item.text, names));
      } catch (const ParseError& e) {
        const std::size_t column = item.where.column + e.column() - 1;
        throw ParseError("line " + std::to_string(item.where.line) + ", column " +
                             std::to_string(column) + ": relator " + std::to_string(index) +
                             " \"" + item.text + "\": " + e.what(),
                         item.where.line, column);
      }
    }
  }
  try {
    cfg.pres = std::make_shared<const Presentation>(names, std::move(relators));
  } catch (const StructuralError& e) {
    throw ParseError(e.what(), 0, 0);
  }

  const Entry& p = require(tables, "target", "p");
  cfg.p = static_cast<std::uint64_t>(as_int(p, "p", 2));
  cfg.k = static_cast<int>(as_int(require(tables, "target", "k"), "k", 1));
  const Entry& n = require(tables, "target", "n");
  cfg.n = static_cast<int>(as_int(n, "n", 1));
  if (cfg.n > kMaxDim) {
    Reader::fail_at(n.where, "'n' must be <= " + std::to_string(kMaxDim));
  }
  try {
    (void)CoeffRing(cfg.p, cfg.k);
  } catch (const StructuralError& e) {
    Reader::fail_at(p.where, e.what());
  }

  if (const Entry* e = optional_entry(tables, "options", "levels")) {
    cfg.levels = static_cast<int>(as_int(*e, "levels", 1));
  }
  if (const Entry* e = optional_entry(tables, "options", "budget")) {
    cfg.budget = static_cast<std::uint64_t>(as_int(*e, "budget", 1));
  }
  if (const Entry* e = optional_entry(tables, "options", "workers")) {
    cfg.workers = static_cast<int>(as_int(*e, "workers", 1));
  }
  if (const Entry* e = optional_entry(tables, "options", "deterministic")) {
    const auto* b = std::get_if<bool>(&e->value);
    if (!b) Reader::fail_at(e->where, "'deterministic' must be true or false");
    cfg.deterministic = *b;
  }
  return cfg;
}

JobConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config file '" + path + "'", 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::uint64_t hard_cap() {
  if (const char* env = std::getenv("LOCSYS_HARD_CAP")) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno == 0 && end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultHardCap;
}

}  // namespace locsys::app
