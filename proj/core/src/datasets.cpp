#include "csk/datasets.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace csk {
namespace {

uint64_t parse_u64(const std::string& text, const std::string& what) {
  uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument(what + ": bad integer '" + text + "'");
  }
  return value;
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    size_t pos = 0;
    const double value = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": bad number '" + text + "'");
  }
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

SparseVector zipf_vector(uint64_t n, double alpha) {
  if (n < 1) throw std::invalid_argument("zipf_vector: n must be >= 1");
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("zipf_vector: alpha must be > 0");
  }
  double norm = 0.0;
  for (uint64_t j = 1; j <= n; ++j) norm += std::pow((double)j, -alpha);
  SparseVector v;
  for (uint64_t k = 1; k <= n; ++k) {
    v.set(k - 1, std::pow((double)k, -alpha) / norm);
  }
  return v;
}

SparseVector one_hot(uint64_t d, uint64_t i) {
  if (d < 1) throw std::invalid_argument("one_hot: d must be >= 1");
  if (i >= d) throw std::invalid_argument("one_hot: index out of range");
  SparseVector v;
  v.set(i, 1.0);
  return v;
}

std::pair<SparseVector, SparseVector> disjoint_pair(uint64_t nnz) {
  if (nnz < 1) throw std::invalid_argument("disjoint_pair: nnz must be >= 1");
  const double x = 1.0 / (double)nnz;
  SparseVector v, w;
  for (uint64_t i = 0; i < nnz; ++i) {
    v.set(i, x);
    w.set(nnz + i, x);
  }
  return {std::move(v), std::move(w)};
}

SparseVector load_counts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_counts: cannot open " + path);
  SparseVector v;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    std::istringstream fields(line);
    uint64_t index = 0;
    double count = 0.0;
    std::string rest;
    if (!(fields >> index >> count) || (fields >> rest)) {
      throw std::runtime_error("load_counts: parse error at " + path +
                               " line " + std::to_string(line_no));
    }
    v.add(index, count);
  }
  if (v.empty()) {
    throw std::runtime_error("load_counts: no entries in " + path);
  }
  return v;
}

SparseVector load_transactions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_transactions: cannot open " + path);
  SparseVector v;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    std::istringstream fields(line);
    std::string token;
    while (fields >> token) {
      uint64_t item = 0;
      const auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + token.size(), item);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw std::runtime_error("load_transactions: parse error at " + path +
                                 " line " + std::to_string(line_no));
      }
      v.add(item, 1.0);
    }
  }
  if (v.empty()) {
    throw std::runtime_error("load_transactions: no entries in " + path);
  }
  return v;
}

void write_counts(const SparseVector& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_counts: cannot open " + path);
  char buf[40];
  for (const auto& [index, value] : v) {
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out << index << ' ' << buf << '\n';
  }
  if (!out) throw std::runtime_error("write_counts: write failed on " + path);
}

SparseVector normalize_l1(const SparseVector& v) {
  const double norm = v.l1();
  if (norm == 0.0) {
    throw std::invalid_argument("normalize_l1: zero vector");
  }
  // Already-normalized input passes through unchanged; rescaling by a norm a
  // few ulps from 1 would perturb entries and break idempotence.
  if (std::fabs(norm - 1.0) <= 1e-9) return v;
  SparseVector out;
  for (const auto& [index, value] : v) out.set(index, value / norm);
  return out;
}

DatasetSpec parse_dataset_spec(const std::string& text) {
  DatasetSpec spec;
  spec.tag = text;
  const size_t first = text.find(':');
  const std::string kind = text.substr(0, first);
  const std::string rest =
      first == std::string::npos ? std::string() : text.substr(first + 1);

  auto split2 = [&](const std::string& s) {
    const size_t mid = s.find(':');
    if (mid == std::string::npos) {
      throw std::invalid_argument("dataset spec: expected two fields in '" +
                                  text + "'");
    }
    return std::pair(s.substr(0, mid), s.substr(mid + 1));
  };

  if (kind == "zipf") {
    auto [n, alpha] = split2(rest);
    spec.kind = DatasetSpec::Kind::zipf;
    spec.n = parse_u64(n, "dataset spec zipf");
    spec.alpha = parse_double(alpha, "dataset spec zipf");
  } else if (kind == "onehot") {
    auto [d, i] = split2(rest);
    spec.kind = DatasetSpec::Kind::one_hot;
    spec.n = parse_u64(d, "dataset spec onehot");
    spec.index = parse_u64(i, "dataset spec onehot");
  } else if (kind == "disjoint") {
    if (rest.empty()) {
      throw std::invalid_argument("dataset spec: disjoint needs NNZ");
    }
    spec.kind = DatasetSpec::Kind::disjoint;
    spec.n = parse_u64(rest, "dataset spec disjoint");
  } else if (kind == "counts") {
    if (rest.empty()) {
      throw std::invalid_argument("dataset spec: counts needs PATH");
    }
    spec.kind = DatasetSpec::Kind::counts_file;
    spec.path = rest;
  } else if (kind == "transactions") {
    if (rest.empty()) {
      throw std::invalid_argument("dataset spec: transactions needs PATH");
    }
    spec.kind = DatasetSpec::Kind::transactions_file;
    spec.path = rest;
  } else {
    throw std::invalid_argument("dataset spec: unknown kind '" + kind + "'");
  }
  return spec;
}

MaterializedDataset materialize(const DatasetSpec& spec) {
  MaterializedDataset out;
  out.tag = spec.tag;
  switch (spec.kind) {
    case DatasetSpec::Kind::zipf:
      out.v = zipf_vector(spec.n, spec.alpha);
      out.dimension = spec.n;
      break;
    case DatasetSpec::Kind::one_hot:
      out.v = one_hot(spec.n, spec.index);
      out.dimension = spec.n;
      break;
    case DatasetSpec::Kind::disjoint: {
      auto [v, w] = disjoint_pair(spec.n);
      out.v = std::move(v);
      out.w = std::move(w);
      out.dimension = 2 * spec.n;
      break;
    }
    case DatasetSpec::Kind::counts_file:
    case DatasetSpec::Kind::transactions_file: {
      SparseVector v = spec.kind == DatasetSpec::Kind::counts_file
                           ? load_counts(spec.path)
                           : load_transactions(spec.path);
      out.v = spec.normalize ? normalize_l1(v) : std::move(v);
      const auto keys = out.v.support();
      out.dimension = keys.empty() ? 0 : keys.back() + 1;
      break;
    }
  }
  return out;
}

}  // namespace csk
