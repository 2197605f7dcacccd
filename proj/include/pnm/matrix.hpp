// Finite partial non-deterministic matrices and their algebra.
#pragma once

#include <boost/dynamic_bitset.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pnm/syntax.hpp"

namespace pnm {

using ValueSet = boost::dynamic_bitset<>;
using ValueMap = std::map<std::string, std::string>;

inline constexpr std::size_t kViabilityCap = 16;
inline constexpr std::size_t kValueCap = 4096;
inline constexpr std::size_t kTableEntryCap = std::size_t(1) << 22;

enum class MatrixKind { matrix, Nmatrix, Pmatrix, PNmatrix };
const char* kind_name(MatrixKind k);

class PNMatrix {
 public:
  struct Table {
    int arity = 0;
    std::vector<ValueSet> entries;  // mixed radix, first argument most significant
  };

  PNMatrix() = default;
  // Tables of sig start out empty (every entry is the empty set).
  PNMatrix(Signature sig, std::vector<std::string> values, const std::vector<std::string>& designated);

  const Signature& sig() const { return sig_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<std::string>& values() const { return values_; }
  const std::string& value(int i) const { return values_[i]; }
  int index_of(const std::string& name) const;
  bool designated(int v) const { return designated_[v]; }
  const ValueSet& designated_set() const { return designated_; }
  ValueSet empty_set() const { return ValueSet(values_.size()); }
  ValueSet full_set() const { return ~ValueSet(values_.size()); }

  const Table& table(const std::string& conn) const;
  const std::map<std::string, Table>& tables() const { return tables_; }
  std::size_t tuple_index(const std::vector<int>& args) const;
  std::vector<int> tuple_at(std::size_t index, int arity) const;
  const ValueSet& entry(const std::string& conn, const std::vector<int>& args) const;
  void set_entry(const std::string& conn, const std::vector<int>& args, ValueSet out);
  void set_entry(const std::string& conn, const std::vector<std::string>& args,
                 const std::vector<std::string>& out);

  bool total() const;
  bool deterministic() const;

  std::string set_str(const ValueSet& s) const;  // "{0, 1}"

 private:
  Signature sig_;
  std::vector<std::string> values_;
  std::map<std::string, int> index_;
  ValueSet designated_;
  std::map<std::string, Table> tables_;
};

// Name-based description, as read from a file, before validation.
struct MatrixSpec {
  struct Row {
    std::vector<std::string> args;
    std::vector<std::string> outputs;  // "*" expands to all values
    int line = 0;
  };
  struct TableSpec {
    std::string name;
    int line = 0;
    std::vector<Row> rows;
  };
  Signature sig;
  std::vector<std::string> values;
  std::vector<std::string> designated;
  std::vector<TableSpec> tables;
};

struct MatrixError : Error {
  std::vector<std::string> problems;
  explicit MatrixError(std::vector<std::string> ps);
};

std::vector<std::string> validate(const MatrixSpec& spec);
std::vector<std::string> validate(const PNMatrix& m);
PNMatrix build_matrix(const MatrixSpec& spec);

MatrixKind classify(const PNMatrix& m);
PNMatrix reduct(const PNMatrix& m, const Signature& sub_sig);
PNMatrix extend(const PNMatrix& m, const Signature& big_sig);
PNMatrix strict_product(const PNMatrix& m1, const PNMatrix& m2);
PNMatrix sum(const std::vector<PNMatrix>& ms);
PNMatrix power(const PNMatrix& m, int k);
// Subalgebra-style restriction: keeps the listed values (in declared order)
// and intersects every entry with them.
PNMatrix restrict_values(const PNMatrix& m, const std::vector<int>& keep);

struct ViabilityReport {
  std::vector<std::vector<int>> components;  // maximal viable sets, value indices ascending
  ValueSet usable;
  ValueSet spurious;
};

bool viable(const PNMatrix& m, const ValueSet& w);
ViabilityReport viable_components(const PNMatrix& m, std::size_t cap = kViabilityCap);
PNMatrix prune(const PNMatrix& m);

// First violation, if any.
std::optional<std::string> check_strict_hom(const ValueMap& h, const PNMatrix& m, const PNMatrix& m0);

// Maps each value of strict_product(m1, m2) to its side-th coordinate.
ValueMap projection(const PNMatrix& m1, const PNMatrix& m2, int side);
// Maps each value x of the index-th summand (1-based) to "index.x".
ValueMap inclusion(const PNMatrix& component, int index);

}  // namespace pnm
