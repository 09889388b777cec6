#include "saddleflow/program_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "saddleflow/error.hpp"

namespace saddleflow {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool is_matrix_program_key(const std::string& key) {
  return key == "Q" || key == "A" || key == "g_rows" || key.rfind("g_quad_", 0) == 0;
}

bool same(const Mat& a, const Mat& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

bool same(const Vec& a, const Vec& b) {
  return a.size() == b.size() && (a.size() == 0 || a == b);
}

void write_vector(std::ostream& out, const std::string& key, const Vec& v) {
  out << key;
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << format_double(v(i));
  out << '\n';
}

void write_matrix(std::ostream& out, const std::string& key, const Mat& m) {
  out << key << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace

std::optional<double> parse_double(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

KvDocument KvDocument::parse(std::istream& in, const std::string& source,
                             const std::function<bool(const std::string&)>& is_matrix_key) {
  KvDocument doc;
  doc.source_ = source;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto toks = split_ws(strip_comment(raw));
    if (toks.empty()) continue;
    Entry e;
    e.key = toks.front();
    e.tokens.assign(toks.begin() + 1, toks.end());
    e.line = line_no;
    if (doc.find(e.key) != nullptr) {
      throw ParseError(source, line_no, "duplicate key '" + e.key + "'");
    }
    if (is_matrix_key(e.key)) {
      if (e.tokens.size() != 2) {
        throw ParseError(source, line_no,
                         "matrix block '" + e.key + "' needs 'rows cols' after the key");
      }
      int rows = 0;
      int cols = 0;
      try {
        rows = std::stoi(e.tokens[0]);
        cols = std::stoi(e.tokens[1]);
      } catch (const std::exception&) {
        throw ParseError(source, line_no, "bad matrix dimensions for '" + e.key + "'");
      }
      if (rows < 0 || cols < 0) throw ParseError(source, line_no, "negative matrix dimension");
      Mat m(rows, cols);
      for (int r = 0; r < rows; ++r) {
        std::vector<std::string> row;
        do {
          if (!std::getline(in, raw)) {
            throw ParseError(source, line_no, "unexpected end of file inside matrix '" + e.key + "'");
          }
          ++line_no;
          row = split_ws(strip_comment(raw));
        } while (row.empty());
        if (static_cast<int>(row.size()) != cols) {
          throw ParseError(source, line_no,
                           "matrix '" + e.key + "' row has " + std::to_string(row.size()) +
                               " entries, expected " + std::to_string(cols));
        }
        for (int c = 0; c < cols; ++c) {
          auto v = parse_double(row[c]);
          if (!v) throw ParseError(source, line_no, "not a number: '" + row[c] + "'");
          m(r, c) = *v;
        }
      }
      e.matrix = std::move(m);
    }
    doc.entries_.push_back(std::move(e));
  }
  return doc;
}

const KvDocument::Entry* KvDocument::find(const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const KvDocument::Entry& KvDocument::require(const std::string& key) const {
  const auto* e = find(key);
  if (!e) throw ParseError(source_, 0, "missing required key '" + key + "'");
  return *e;
}

void KvDocument::fail(const Entry& e, const std::string& what) const {
  throw ParseError(source_, e.line, what);
}

std::string KvDocument::string(const std::string& key) const {
  const auto& e = require(key);
  if (e.tokens.size() != 1) fail(e, "key '" + key + "' expects one value");
  return e.tokens[0];
}

double KvDocument::number(const std::string& key) const {
  const auto& e = require(key);
  if (e.tokens.size() != 1) fail(e, "key '" + key + "' expects one number");
  auto v = parse_double(e.tokens[0]);
  if (!v) fail(e, "not a number: '" + e.tokens[0] + "'");
  return *v;
}

int KvDocument::integer(const std::string& key) const {
  const auto& e = require(key);
  if (e.tokens.size() != 1) fail(e, "key '" + key + "' expects one integer");
  int v = 0;
  const auto& t = e.tokens[0];
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) fail(e, "not an integer: '" + t + "'");
  return v;
}

Vec KvDocument::vector(const std::string& key) const {
  const auto& e = require(key);
  Vec v(static_cast<Eigen::Index>(e.tokens.size()));
  for (std::size_t i = 0; i < e.tokens.size(); ++i) {
    auto d = parse_double(e.tokens[i]);
    if (!d) fail(e, "not a number: '" + e.tokens[i] + "'");
    v(static_cast<Eigen::Index>(i)) = *d;
  }
  return v;
}

bool KvDocument::boolean(const std::string& key) const {
  const auto s = string(key);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  fail(require(key), "expected true|false for '" + key + "'");
}

Mat KvDocument::matrix(const std::string& key) const {
  const auto& e = require(key);
  if (!e.matrix) fail(e, "key '" + key + "' is not a matrix block");
  return *e.matrix;
}

ConstrainedProgram parse_program(std::istream& in, const std::string& source) {
  const auto doc = KvDocument::parse(in, source, is_matrix_program_key);
  static const std::vector<std::string> known = {"name", "n", "p", "m", "objective", "Q", "c",
                                                 "d", "g_rows", "A", "b", "m_lb", "M_ub",
                                                 "L_hess"};
  for (const auto& e : doc.entries()) {
    if (e.key.rfind("g_quad_", 0) == 0) continue;
    if (std::find(known.begin(), known.end(), e.key) == known.end()) {
      doc.fail(e, "unknown key '" + e.key + "'");
    }
  }

  auto check_vec = [&](const char* key, const Vec& v, Eigen::Index len) {
    if (v.size() != len) {
      doc.fail(doc.require(key), std::string("'") + key + "' must have " + std::to_string(len) + " entries");
    }
  };
  auto check_mat = [&](const std::string& key, const Mat& M, Eigen::Index r, Eigen::Index c) {
    if (M.rows() != r || M.cols() != c) {
      doc.fail(doc.require(key), "'" + key + "' must be " + std::to_string(r) + " x " + std::to_string(c));
    }
  };

  ConstrainedProgram prog;
  prog.name = doc.has("name") ? doc.string("name") : "program";
  prog.n = doc.integer("n");
  const int p = doc.has("p") ? doc.integer("p") : 0;
  const int m = doc.has("m") ? doc.integer("m") : 0;
  if (prog.n <= 0 || p < 0 || m < 0) doc.fail(doc.require("n"), "dimensions must be n > 0, p >= 0, m >= 0");

  const auto& obj_entry = doc.require("objective");
  if (obj_entry.tokens.empty()) doc.fail(obj_entry, "objective needs a kind");
  const auto& kind = obj_entry.tokens[0];
  if (kind == "quadratic") {
    if (obj_entry.tokens.size() != 1) doc.fail(obj_entry, "quadratic objective takes no name");
    QuadraticObjective q;
    q.Q = doc.matrix("Q");
    check_mat("Q", q.Q, prog.n, prog.n);
    q.c = doc.has("c") ? doc.vector("c") : Vec::Zero(prog.n);
    if (doc.has("c")) check_vec("c", q.c, prog.n);
    q.d = doc.has("d") ? doc.number("d") : 0.0;
    prog.objective = q;
  } else if (kind == "builtin") {
    if (obj_entry.tokens.size() != 2) doc.fail(obj_entry, "usage: objective builtin <name>");
    BuiltinObjective b;
    b.name = obj_entry.tokens[1];
    if (doc.has("Q")) b.Q = doc.matrix("Q");
    if (doc.has("c")) b.c = doc.vector("c");
    prog.objective = b;
  } else {
    doc.fail(obj_entry, "unknown objective kind '" + kind + "'");
  }

  if (p > 0) {
    const Mat rows = doc.matrix("g_rows");
    if (rows.rows() != p || rows.cols() != prog.n + 1) {
      doc.fail(doc.require("g_rows"), "g_rows must be p x (n+1): coefficients then offset");
    }
    for (int j = 0; j < p; ++j) {
      InequalitySpec g;
      g.a = rows.row(j).head(prog.n).transpose();
      g.offset = rows(j, prog.n);
      const auto qkey = "g_quad_" + std::to_string(j + 1);
      if (doc.has(qkey)) {
        g.P = doc.matrix(qkey);
        check_mat(qkey, g.P, prog.n, prog.n);
      }
      prog.ineq.push_back(std::move(g));
    }
  } else if (doc.has("g_rows") && doc.matrix("g_rows").rows() != 0) {
    doc.fail(doc.require("g_rows"), "g_rows given but p = 0");
  }

  if (m > 0) {
    prog.A = doc.matrix("A");
    check_mat("A", prog.A, m, prog.n);
    prog.b = doc.vector("b");
    check_vec("b", prog.b, m);
  } else {
    prog.A = Mat(0, prog.n);
    prog.b = Vec(0);
  }

  const bool any_curv = doc.has("m_lb") || doc.has("M_ub") || doc.has("L_hess");
  if (any_curv) {
    Curvature c;
    c.m_lb = doc.number("m_lb");
    c.M_ub = doc.number("M_ub");
    c.L_hess = doc.has("L_hess") ? doc.number("L_hess") : 0.0;
    prog.curvature = c;
  }

  try {
    prog.validate();
  } catch (const Error& e) {
    throw ParseError(source, 0, e.what());
  }
  return prog;
}

ConstrainedProgram load_program(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open program file");
  return parse_program(in, path.string());
}

void write_program(std::ostream& out, const ConstrainedProgram& prog) {
  out << "# saddleflow program\n";
  out << "name " << prog.name << '\n';
  out << "n " << prog.n << '\n';
  out << "p " << prog.p() << '\n';
  out << "m " << prog.m() << '\n';
  std::visit(
      [&](const auto& obj) {
        using T = std::decay_t<decltype(obj)>;
        if constexpr (std::is_same_v<T, QuadraticObjective>) {
          out << "objective quadratic\n";
          write_matrix(out, "Q", obj.Q);
          write_vector(out, "c", obj.c);
          out << "d " << format_double(obj.d) << '\n';
        } else {
          out << "objective builtin " << obj.name << '\n';
          if (obj.Q.size() != 0) write_matrix(out, "Q", obj.Q);
          if (obj.c.size() != 0) write_vector(out, "c", obj.c);
        }
      },
      prog.objective);
  if (prog.p() > 0) {
    Mat rows(prog.p(), prog.n + 1);
    for (int j = 0; j < prog.p(); ++j) {
      rows.row(j).head(prog.n) = prog.ineq[j].a.transpose();
      rows(j, prog.n) = prog.ineq[j].offset;
    }
    write_matrix(out, "g_rows", rows);
    for (int j = 0; j < prog.p(); ++j) {
      if (!prog.ineq[j].affine()) write_matrix(out, "g_quad_" + std::to_string(j + 1), prog.ineq[j].P);
    }
  }
  if (prog.m() > 0) {
    write_matrix(out, "A", prog.A);
    write_vector(out, "b", prog.b);
  }
  if (prog.curvature) {
    out << "m_lb " << format_double(prog.curvature->m_lb) << '\n';
    out << "M_ub " << format_double(prog.curvature->M_ub) << '\n';
    out << "L_hess " << format_double(prog.curvature->L_hess) << '\n';
  }
}

bool programs_equal(const ConstrainedProgram& a, const ConstrainedProgram& b) {
  if (a.name != b.name || a.n != b.n || a.p() != b.p() || a.m() != b.m()) return false;
  if (a.objective.index() != b.objective.index()) return false;
  if (const auto* qa = std::get_if<QuadraticObjective>(&a.objective)) {
    const auto& qb = std::get<QuadraticObjective>(b.objective);
    if (!same(qa->Q, qb.Q) || !same(qa->c, qb.c) || qa->d != qb.d) return false;
  } else {
    const auto& ba = std::get<BuiltinObjective>(a.objective);
    const auto& bb = std::get<BuiltinObjective>(b.objective);
    if (ba.name != bb.name || !same(ba.Q, bb.Q) || !same(ba.c, bb.c)) return false;
  }
  for (int j = 0; j < a.p(); ++j) {
    if (!same(a.ineq[j].a, b.ineq[j].a) || a.ineq[j].offset != b.ineq[j].offset ||
        !same(a.ineq[j].P, b.ineq[j].P)) {
      return false;
    }
  }
  if (a.m() > 0 && (!same(a.A, b.A) || !same(a.b, b.b))) return false;
  if (a.curvature.has_value() != b.curvature.has_value()) return false;
  if (a.curvature) {
    if (a.curvature->m_lb != b.curvature->m_lb || a.curvature->M_ub != b.curvature->M_ub ||
        a.curvature->L_hess != b.curvature->L_hess) {
      return false;
    }
  }
  return true;
}

}  // namespace saddleflow
