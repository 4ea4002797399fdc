#include "plg/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "plg/error.hpp"
#include "plg/field.hpp"

namespace plg {

namespace {

using nlohmann::json;

// One vector of whitespace-separated tokens per non-blank line.
std::vector<std::vector<std::string>> tokenize(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (!toks.empty()) rows.push_back(std::move(toks));
  }
  return rows;
}

int parse_int(const std::string& tok, const char* what) {
  int v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    fail(Errc::invalid_input,
         std::string(what) + ": expected an integer, got '" + tok + "'");
  return v;
}

bool looks_like_json(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{';
  }
  return false;
}

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) fail(Errc::invalid_input, "malformed JSON");
  if (!j.is_object()) fail(Errc::invalid_input, "JSON input must be an object");
  return j;
}

int json_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    fail(Errc::invalid_input,
         std::string("JSON field '") + key + "' must be an integer");
  return j[key].get<int>();
}

// Reads an optional array-of-integer-arrays field, each inner array of
// length `arity` (0 = any length).
std::vector<std::vector<int>> json_tuples(const json& j, const char* key,
                                          std::size_t arity) {
  std::vector<std::vector<int>> out;
  if (!j.contains(key)) return out;
  const json& arr = j[key];
  if (!arr.is_array())
    fail(Errc::invalid_input,
         std::string("JSON field '") + key + "' must be an array");
  for (const json& row : arr) {
    if (!row.is_array() || (arity != 0 && row.size() != arity))
      fail(Errc::invalid_input,
           std::string("JSON field '") + key + "': malformed entry");
    std::vector<int> t;
    for (const json& v : row) {
      if (!v.is_number_integer())
        fail(Errc::invalid_input,
             std::string("JSON field '") + key + "': entries must be integers");
      t.push_back(v.get<int>());
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::pair<int, int>> checked_ortho(
    const std::vector<std::vector<int>>& raw, int n) {
  std::vector<std::pair<int, int>> ortho;
  for (const auto& t : raw) {
    int a = t[0], b = t[1];
    if (a < 0 || b >= n || a >= b)
      fail(Errc::invalid_input, "ortho pair (" + std::to_string(a) + "," +
                                    std::to_string(b) +
                                    "): need 0 <= i < j < points");
    ortho.emplace_back(a, b);
  }
  std::sort(ortho.begin(), ortho.end());
  ortho.erase(std::unique(ortho.begin(), ortho.end()), ortho.end());
  return ortho;
}

}  // namespace

GeoFile parse_geometry(const std::string& text) {
  int n = 0;
  std::vector<std::vector<int>> lines;
  std::vector<std::vector<int>> raw_ortho;

  if (looks_like_json(text)) {
    json j = parse_json(text);
    n = json_int(j, "points");
    lines = json_tuples(j, "lines", 0);
    raw_ortho = json_tuples(j, "ortho", 2);
  } else {
    auto rows = tokenize(text);
    if (rows.empty() || rows[0][0] != "points" || rows[0].size() != 2)
      fail(Errc::invalid_input, "geometry file must start with 'points N'");
    n = parse_int(rows[0][1], "points");
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& toks = rows[r];
      if (toks[0] == "line") {
        std::vector<int> l;
        for (std::size_t k = 1; k < toks.size(); ++k)
          l.push_back(parse_int(toks[k], "line"));
        lines.push_back(std::move(l));
      } else if (toks[0] == "ortho") {
        if (toks.size() != 3)
          fail(Errc::invalid_input, "ortho directive needs exactly two points");
        raw_ortho.push_back(
            {parse_int(toks[1], "ortho"), parse_int(toks[2], "ortho")});
      } else {
        fail(Errc::invalid_input, "unknown directive '" + toks[0] + "'");
      }
    }
  }

  for (const auto& l : lines)
    if (l.size() < 3)
      fail(Errc::invalid_input, "each line needs at least three points");
  std::vector<std::pair<int, int>> ortho = checked_ortho(raw_ortho, n);
  return {Geometry(n, std::move(lines)), std::move(ortho)};
}

std::string write_geometry(const GeoFile& f) {
  std::ostringstream os;
  os << "points " << f.geom.n_points() << "\n";
  for (const auto& l : f.geom.lines()) {
    os << "line";
    for (int p : l) os << " " << p;
    os << "\n";
  }
  for (const auto& [a, b] : f.ortho) os << "ortho " << a << " " << b << "\n";
  return os.str();
}

std::string write_geometry_json(const GeoFile& f) {
  json j;
  j["points"] = f.geom.n_points();
  j["lines"] = json::array();
  for (const auto& l : f.geom.lines()) j["lines"].push_back(l);
  if (f.has_ortho()) {
    j["ortho"] = json::array();
    for (const auto& [a, b] : f.ortho)
      j["ortho"].push_back(std::vector<int>{a, b});
  }
  return j.dump() + "\n";
}

LatFile parse_lattice(const std::string& text) {
  int n = 0;
  std::vector<std::vector<int>> raw_leq;
  std::vector<std::vector<int>> raw_perp;

  if (looks_like_json(text)) {
    json j = parse_json(text);
    n = json_int(j, "elements");
    raw_leq = json_tuples(j, "leq", 2);
    raw_perp = json_tuples(j, "perp", 2);
  } else {
    auto rows = tokenize(text);
    if (rows.empty() || rows[0][0] != "elements" || rows[0].size() != 2)
      fail(Errc::invalid_input, "lattice file must start with 'elements N'");
    n = parse_int(rows[0][1], "elements");
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& toks = rows[r];
      if (toks.size() != 3 || (toks[0] != "leq" && toks[0] != "perp"))
        fail(Errc::invalid_input,
             "expected 'leq i j' or 'perp i j', got '" + toks[0] + "'");
      auto& dst = toks[0] == "leq" ? raw_leq : raw_perp;
      dst.push_back({parse_int(toks[1], toks[0].c_str()),
                     parse_int(toks[2], toks[0].c_str())});
    }
  }

  std::vector<std::pair<int, int>> leq;
  for (const auto& t : raw_leq) {
    if (t[0] < 0 || t[0] >= n || t[1] < 0 || t[1] >= n)
      fail(Errc::invalid_input, "leq pair out of range");
    leq.emplace_back(t[0], t[1]);
  }
  std::vector<int> perp;
  if (!raw_perp.empty()) {
    perp.assign(n, -1);
    for (const auto& t : raw_perp) {
      if (t[0] < 0 || t[0] >= n || t[1] < 0 || t[1] >= n)
        fail(Errc::invalid_input, "perp pair out of range");
      if (perp[t[0]] != -1)
        fail(Errc::invalid_input,
             "perp listed twice for element " + std::to_string(t[0]));
      perp[t[0]] = t[1];
    }
    for (int i = 0; i < n; ++i)
      if (perp[i] == -1)
        fail(Errc::invalid_input,
             "perp map is partial: element " + std::to_string(i) + " missing");
  }
  return {FiniteLattice::from_order(n, leq), std::move(perp)};
}

std::string write_lattice(const LatFile& f) {
  std::ostringstream os;
  os << "elements " << f.lat.n << "\n";
  for (int i = 0; i < f.lat.n; ++i)
    for (int j = 0; j < f.lat.n; ++j)
      if (i != j && f.lat.leq(i, j)) os << "leq " << i << " " << j << "\n";
  for (std::size_t i = 0; i < f.perp.size(); ++i)
    os << "perp " << i << " " << f.perp[i] << "\n";
  return os.str();
}

std::string write_lattice_json(const LatFile& f) {
  json j;
  j["elements"] = f.lat.n;
  j["leq"] = json::array();
  for (int a = 0; a < f.lat.n; ++a)
    for (int b = 0; b < f.lat.n; ++b)
      if (a != b && f.lat.leq(a, b)) j["leq"].push_back(std::vector<int>{a, b});
  if (f.has_perp()) {
    j["perp"] = json::array();
    for (std::size_t i = 0; i < f.perp.size(); ++i)
      j["perp"].push_back(std::vector<int>{static_cast<int>(i), f.perp[i]});
  }
  return j.dump() + "\n";
}

Matrix parse_gram(const std::string& text) {
  const FieldSpec q = FieldSpec::rationals();
  int n = 0;
  std::vector<std::vector<std::string>> entry_rows;

  if (looks_like_json(text)) {
    json j = parse_json(text);
    n = json_int(j, "dim");
    if (!j.contains("rows") || !j["rows"].is_array())
      fail(Errc::invalid_input, "JSON field 'rows' must be an array");
    for (const json& row : j["rows"]) {
      if (!row.is_array())
        fail(Errc::invalid_input, "JSON field 'rows': malformed row");
      std::vector<std::string> r;
      for (const json& v : row) {
        if (!v.is_string())
          fail(Errc::invalid_input, "gram entries must be rational strings");
        r.push_back(v.get<std::string>());
      }
      entry_rows.push_back(std::move(r));
    }
  } else {
    auto rows = tokenize(text);
    if (rows.empty() || rows[0][0] != "dim" || rows[0].size() != 2)
      fail(Errc::invalid_input, "gram file must start with 'dim N'");
    n = parse_int(rows[0][1], "dim");
    for (std::size_t r = 1; r < rows.size(); ++r) entry_rows.push_back(rows[r]);
  }

  if (n < 1) fail(Errc::invalid_input, "gram dimension must be positive");
  if (static_cast<int>(entry_rows.size()) != n)
    fail(Errc::invalid_input, "gram file needs exactly " + std::to_string(n) +
                                  " rows, got " +
                                  std::to_string(entry_rows.size()));
  std::vector<std::vector<Scalar>> rows;
  for (const auto& er : entry_rows) {
    if (static_cast<int>(er.size()) != n)
      fail(Errc::invalid_input, "gram row needs exactly " + std::to_string(n) +
                                    " entries, got " +
                                    std::to_string(er.size()));
    std::vector<Scalar> row;
    for (const std::string& tok : er) row.push_back(parse_scalar(q, tok));
    rows.push_back(std::move(row));
  }
  return Matrix::from_rows(q, rows);
}

std::string write_gram(const Matrix& gram) {
  std::ostringstream os;
  os << "dim " << gram.rows() << "\n";
  for (int r = 0; r < gram.rows(); ++r) {
    for (int c = 0; c < gram.cols(); ++c)
      os << (c ? " " : "") << gram.at(r, c).str();
    os << "\n";
  }
  return os.str();
}

std::string write_gram_json(const Matrix& gram) {
  json j;
  j["dim"] = gram.rows();
  j["rows"] = json::array();
  for (int r = 0; r < gram.rows(); ++r) {
    std::vector<std::string> row;
    for (int c = 0; c < gram.cols(); ++c) row.push_back(gram.at(r, c).str());
    j["rows"].push_back(row);
  }
  return j.dump() + "\n";
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace plg
