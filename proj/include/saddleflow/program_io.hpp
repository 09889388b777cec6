#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "saddleflow/problem.hpp"

namespace saddleflow {

/// Line-oriented key/value document shared by program and scenario files.
///
///   # comment
///   key token token ...
///   MATRIXKEY rows cols
///   r0c0 r0c1 ...
///   ...
///
/// Which keys introduce matrix blocks is decided by the caller.
class KvDocument {
 public:
  struct Entry {
    std::string key;
    std::vector<std::string> tokens;
    std::optional<Mat> matrix;
    int line = 0;
  };

  static KvDocument parse(std::istream& in, const std::string& source,
                          const std::function<bool(const std::string&)>& is_matrix_key);

  const std::string& source() const { return source_; }
  const std::vector<Entry>& entries() const { return entries_; }

  const Entry* find(const std::string& key) const;
  const Entry& require(const std::string& key) const;

  bool has(const std::string& key) const { return find(key) != nullptr; }
  std::string string(const std::string& key) const;
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  Vec vector(const std::string& key) const;
  bool boolean(const std::string& key) const;
  Mat matrix(const std::string& key) const;

  [[noreturn]] void fail(const Entry& e, const std::string& what) const;

 private:
  std::string source_;
  std::vector<Entry> entries_;
};

/// Strict decimal parsing (correctly rounded, scientific notation accepted).
/// Returns nullopt on any trailing garbage.
std::optional<double> parse_double(const std::string& token);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

ConstrainedProgram parse_program(std::istream& in, const std::string& source = "<program>");
ConstrainedProgram load_program(const std::filesystem::path& path);
void write_program(std::ostream& out, const ConstrainedProgram& prog);

/// Exact structural equality (bitwise on all numbers).
bool programs_equal(const ConstrainedProgram& a, const ConstrainedProgram& b);

}  // namespace saddleflow
