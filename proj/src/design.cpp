#include "oofa/design.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "oofa/errors.hpp"

namespace oofa {

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error([&violations] {
        std::string msg = "design validation failed:";
        for (const auto& v : violations) msg += "\n  - " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

BlockOofaDesign::BlockOofaDesign(int m, int k, std::vector<int> positions,
                                 std::vector<int> blocks,
                                 std::optional<std::vector<double>> response)
    : m_(m),
      k_(k),
      blocked_(k > 1),
      positions_(std::move(positions)),
      blocks_(std::move(blocks)),
      response_(std::move(response)) {
  if (m_ < 2 || m_ > 9) {
    throw SizeLimit("component count m must lie in 2..9, got " + std::to_string(m_));
  }
  if (k_ < 1) throw std::invalid_argument("block count must be >= 1");
  if (positions_.size() != blocks_.size() * static_cast<std::size_t>(m_)) {
    throw std::invalid_argument("position grid size does not match run count");
  }
  if (response_ && response_->size() != blocks_.size()) {
    throw std::invalid_argument("response length does not match run count");
  }
}

BlockOofaDesign BlockOofaDesign::unblocked(int m, std::vector<int> positions,
                                           std::optional<std::vector<double>> response) {
  std::vector<int> blocks(positions.size() / m, 1);
  return BlockOofaDesign(m, 1, std::move(positions), std::move(blocks), std::move(response));
}

BlockOofaDesign BlockOofaDesign::without_response() const {
  return BlockOofaDesign(m_, k_, positions_, blocks_, std::nullopt);
}

DesignShape decompose_block_size(int m, int k, int n_B) {
  std::int64_t mfact = 1;
  for (int i = 2; i <= m; ++i) mfact *= i;
  if (n_B < 1 || n_B > mfact / k) {
    throw InfeasibleSize("block size " + std::to_string(n_B) + " is outside 1..floor(" +
                         std::to_string(m) + "!/" + std::to_string(k) + ")");
  }
  DesignShape s;
  s.m = m;
  s.k = k;
  s.n_B = n_B;
  const int unit = m * (m - 1);
  s.lambda = n_B / unit;
  const int rem = n_B - s.lambda * unit;
  s.gamma = rem / m;
  s.delta = rem - s.gamma * m;
  return s;
}

std::vector<std::string> validate(const BlockOofaDesign& d) {
  std::vector<std::string> out;
  const int m = d.m();
  std::vector<int> seen(m + 1);
  for (int i = 0; i < d.runs(); ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    bool ok = true;
    for (int j = 0; j < m; ++j) {
      const int z = d.position(i, j);
      if (z < 1 || z > m || seen[z]++) ok = false;
    }
    if (!ok) {
      out.push_back("run " + std::to_string(i + 1) + ": row is not a permutation of 1.." +
                    std::to_string(m));
    }
  }
  std::vector<int> count(d.k() + 1, 0);
  bool labels_ok = true;
  for (int i = 0; i < d.runs(); ++i) {
    const int b = d.block(i);
    if (b < 1 || b > d.k()) {
      out.push_back("run " + std::to_string(i + 1) + ": block label " + std::to_string(b) +
                    " outside 1.." + std::to_string(d.k()));
      labels_ok = false;
    } else {
      ++count[b];
    }
  }
  if (labels_ok && d.k() > 0) {
    if (d.runs() % d.k() != 0) {
      out.push_back("unbalanced blocks: " + std::to_string(d.runs()) + " runs in " +
                    std::to_string(d.k()) + " blocks");
    } else {
      const int n_B = d.runs() / d.k();
      for (int b = 1; b <= d.k(); ++b) {
        if (count[b] != n_B) {
          out.push_back("unbalanced blocks: block " + std::to_string(b) + " has " +
                        std::to_string(count[b]) + " runs, expected " + std::to_string(n_B));
        }
      }
    }
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int parse_int(const std::string& s, int row, const std::string& col) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("row " + std::to_string(row) + ", column " + col + ": expected integer, got '" +
                     s + "'");
  }
}

double parse_double(const std::string& s, int row) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("row " + std::to_string(row) + ", column y: expected number, got '" + s + "'");
  }
}

}  // namespace

BlockOofaDesign read_design_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw ParseError("'" + path + "': empty file");
  const std::vector<std::string> header = split_csv_line(line);
  if (header.empty() || header[0] != "Run") {
    throw ParseError("'" + path + "': header must start with Run, got '" + line + "'");
  }
  int m = 0;
  std::size_t col = 1;
  while (col < header.size() && header[col] == "Z" + std::to_string(m + 1)) {
    ++m;
    ++col;
  }
  if (m < 2) throw ParseError("'" + path + "': header must list columns Z1..Zm with m >= 2");
  if (m > 9) throw SizeLimit("'" + path + "': designs with m > 9 are not supported");
  bool has_block = false, has_y = false;
  if (col < header.size() && header[col] == "B") {
    has_block = true;
    ++col;
  }
  if (col < header.size() && header[col] == "y") {
    has_y = true;
    ++col;
  }
  if (col != header.size()) {
    throw ParseError("'" + path + "': unexpected column '" + header[col] + "'");
  }

  std::vector<int> positions, blocks;
  std::vector<double> ys;
  int rownum = 1;
  while (std::getline(in, line)) {
    ++rownum;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> f = split_csv_line(line);
    const std::size_t expect = 1 + m + (has_block ? 1 : 0) + (has_y ? 1 : 0);
    if (f.size() != expect) {
      throw ParseError("row " + std::to_string(rownum) + ": expected " + std::to_string(expect) +
                       " fields, got " + std::to_string(f.size()));
    }
    for (int j = 0; j < m; ++j) {
      positions.push_back(parse_int(f[1 + j], rownum, "Z" + std::to_string(j + 1)));
    }
    blocks.push_back(has_block ? parse_int(f[1 + m], rownum, "B") : 1);
    if (has_y) ys.push_back(parse_double(f.back(), rownum));
  }

  int k = 1;
  for (int b : blocks) k = std::max(k, b);
  BlockOofaDesign d(m, has_block ? k : 1, std::move(positions), std::move(blocks),
                    has_y ? std::optional(std::move(ys)) : std::nullopt);
  auto violations = validate(d);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return d;
}

std::string design_to_csv(const BlockOofaDesign& d) {
  std::ostringstream out;
  out << "Run";
  for (int j = 1; j <= d.m(); ++j) out << ",Z" << j;
  if (d.blocked()) out << ",B";
  if (d.has_response()) out << ",y";
  out << "\n";
  for (int i = 0; i < d.runs(); ++i) {
    out << (i + 1);
    for (int j = 0; j < d.m(); ++j) out << ',' << d.position(i, j);
    if (d.blocked()) out << ',' << d.block(i);
    if (d.has_response()) {
      // shortest representation that round-trips exactly
      char buf[32];
      const auto r = std::to_chars(buf, buf + sizeof buf, d.response()[i]);
      out << ',' << std::string_view(buf, r.ptr - buf);
    }
    out << "\n";
  }
  return out.str();
}

void write_design_csv(const BlockOofaDesign& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << design_to_csv(d);
}

BlockOofaDesign full_design(int m, int k) {
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<int> rows;
  do {
    rows.insert(rows.end(), perm.begin(), perm.end());
  } while (std::next_permutation(perm.begin(), perm.end()));
  const int nperm = static_cast<int>(rows.size()) / m;

  std::vector<int> positions;
  std::vector<int> blocks;
  positions.reserve(static_cast<std::size_t>(nperm) * m * k);
  blocks.reserve(static_cast<std::size_t>(nperm) * k);
  for (int b = 1; b <= k; ++b) {
    positions.insert(positions.end(), rows.begin(), rows.end());
    blocks.insert(blocks.end(), nperm, b);
  }
  return BlockOofaDesign(m, k, std::move(positions), std::move(blocks));
}

}  // namespace oofa
