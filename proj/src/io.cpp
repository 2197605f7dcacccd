#include "pnm/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace pnm {

namespace {

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

}  // namespace

MatrixSpec parse_matrix_spec(const std::string& text) {
  MatrixSpec spec;
  std::vector<std::string> errs;
  enum class Block { none, signature, table } block = Block::none;
  bool have_values = false, have_designated = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto err = [&](const std::string& m) { errs.push_back("line " + std::to_string(lineno) + ": " + m); };

  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;

    if (starts_with(line, "signature:")) {
      block = Block::signature;
      line = trim(line.substr(10));
      if (line.empty()) continue;
    } else if (starts_with(line, "values:")) {
      if (have_values) err("duplicate values line");
      spec.values = tokens(line.substr(7));
      have_values = true;
      block = Block::none;
      continue;
    } else if (starts_with(line, "designated:")) {
      if (have_designated) err("duplicate designated line");
      spec.designated = tokens(line.substr(11));
      have_designated = true;
      block = Block::none;
      continue;
    } else if (starts_with(line, "table ")) {
      std::string name = trim(line.substr(6));
      if (name.empty() || name.back() != ':') {
        err("expected 'table <name>:'");
        block = Block::none;
        continue;
      }
      name = trim(name.substr(0, name.size() - 1));
      spec.tables.push_back({name, lineno, {}});
      block = Block::table;
      continue;
    }

    if (block == Block::signature) {
      for (const auto& item : tokens(line)) {
        auto slash = item.find('/');
        if (slash == std::string::npos || slash == 0) {
          err("expected name/arity, got '" + item + "'");
          continue;
        }
        try {
          std::size_t used = 0;
          int ar = std::stoi(item.substr(slash + 1), &used);
          if (used != item.size() - slash - 1) throw std::invalid_argument("arity");
          spec.sig.add(item.substr(0, slash), ar);
        } catch (const Error& e) {
          err(e.what());
        } catch (const std::exception&) {
          err("bad arity in '" + item + "'");
        }
      }
    } else if (block == Block::table) {
      auto colon = line.find(':');
      if (colon == std::string::npos || line.find(':', colon + 1) != std::string::npos) {
        err("expected '<args> : <outputs>'");
        continue;
      }
      MatrixSpec::Row row;
      row.args = tokens(line.substr(0, colon));
      row.outputs = tokens(line.substr(colon + 1));
      row.line = lineno;
      if (row.outputs.empty()) {
        err("empty output list (write '-' for the empty set)");
        continue;
      }
      if (row.outputs.size() == 1 && row.outputs[0] == "-") row.outputs.clear();
      spec.tables.back().rows.push_back(std::move(row));
    } else {
      err("unexpected line '" + line + "'");
    }
  }
  if (!have_values) errs.push_back("missing 'values:' line");
  if (!have_designated) errs.push_back("missing 'designated:' line");
  if (!errs.empty()) throw MatrixError(std::move(errs));
  return spec;
}

PNMatrix read_matrix_string(const std::string& text) { return build_matrix(parse_matrix_spec(text)); }

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

PNMatrix read_matrix(const std::string& path) {
  try {
    return read_matrix_string(read_text_file(path));
  } catch (const MatrixError& e) {
    std::vector<std::string> ps;
    for (const auto& p : e.problems) ps.push_back(path + ": " + p);
    throw MatrixError(std::move(ps));
  }
}

std::string write_matrix(const PNMatrix& m) {
  std::ostringstream out;
  out << "signature:\n";
  for (const auto& [name, ar] : m.sig().connectives()) out << "  " << name << "/" << ar << "\n";
  out << "values:";
  for (const auto& v : m.values()) out << " " << v;
  out << "\ndesignated:";
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m.designated(static_cast<int>(i))) out << " " << m.value(static_cast<int>(i));
  out << "\n";
  for (const auto& [name, t] : m.tables()) {
    out << "\ntable " << name << ":\n";
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
      out << " ";
      for (int a : m.tuple_at(i, t.arity)) out << " " << m.value(a);
      out << " :";
      const auto& e = t.entries[i];
      if (e.none()) {
        out << " -";
      } else if (m.size() > 1 && e.all()) {
        out << " *";
      } else {
        for (auto y = e.find_first(); y != ValueSet::npos; y = e.find_next(y))
          out << " " << m.value(static_cast<int>(y));
      }
      out << "\n";
    }
  }
  return out.str();
}

void write_matrix_file(const PNMatrix& m, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << write_matrix(m);
}

PNMatrix load_matrix(const std::string& ref) {
  std::string base = ref;
  std::string conns;
  auto colon = ref.rfind(':');
  if (colon != std::string::npos) {
    base = ref.substr(0, colon);
    conns = ref.substr(colon + 1);
  }
  PNMatrix m;
  if (fixture_info(base)) {
    m = builtin(base);
  } else if (std::filesystem::exists(ref)) {
    return read_matrix(ref);
  } else if (std::filesystem::exists(base)) {
    m = read_matrix(base);
  } else {
    return builtin(base);  // reports the fixture list
  }
  if (colon == std::string::npos) return m;
  std::vector<std::string> names;
  std::stringstream ss(conns);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) names.push_back(item);
  }
  return reduct(m, m.sig().restrict_to(names));
}

}  // namespace pnm
