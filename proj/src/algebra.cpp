#include "gapkit/algebra.hpp"

#include <cinttypes>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gapkit {

AlgebraElement::AlgebraElement(Multiplier mult, int fiber_dim)
    : mult_(std::move(mult)), fiber_dim_(fiber_dim) {
  if (fiber_dim_ < 1) throw std::invalid_argument("AlgebraElement: fiber_dim must be >= 1");
}

AlgebraElement AlgebraElement::delta(const Multiplier& mult, const GroupElem& g, int fiber_dim) {
  AlgebraElement e(mult, fiber_dim);
  e.set_block(g, Matrix::Identity(fiber_dim, fiber_dim));
  return e;
}

AlgebraElement AlgebraElement::delta(const Multiplier& mult, const GroupElem& g,
                                     const Matrix& block) {
  AlgebraElement e(mult, static_cast<int>(block.rows()));
  e.set_block(g, block);
  return e;
}

Matrix AlgebraElement::block(const GroupElem& g) const {
  auto it = blocks_.find(g);
  if (it == blocks_.end()) return Matrix::Zero(fiber_dim_, fiber_dim_);
  return it->second;
}

void AlgebraElement::set_block(const GroupElem& g, const Matrix& m) {
  if (static_cast<int>(g.size()) != mult_.rank())
    throw std::invalid_argument("AlgebraElement: group element rank mismatch");
  if (m.rows() != fiber_dim_ || m.cols() != fiber_dim_)
    throw std::invalid_argument("AlgebraElement: block dimension mismatch");
  if (m.norm() < kPruneTol)
    blocks_.erase(g);
  else
    blocks_[g] = m;
}

void AlgebraElement::add_block(const GroupElem& g, const Matrix& m) {
  auto it = blocks_.find(g);
  if (it == blocks_.end())
    set_block(g, m);
  else {
    it->second += m;
    if (it->second.norm() < kPruneTol) blocks_.erase(it);
  }
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  if (o.fiber_dim_ != fiber_dim_) throw std::invalid_argument("operator+=: fiber mismatch");
  if (o.mult_ != mult_) throw std::invalid_argument("operator+=: multiplier mismatch");
  for (const auto& [g, m] : o.blocks_) add_block(g, m);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  if (o.fiber_dim_ != fiber_dim_) throw std::invalid_argument("operator-=: fiber mismatch");
  if (o.mult_ != mult_) throw std::invalid_argument("operator-=: multiplier mismatch");
  for (const auto& [g, m] : o.blocks_) add_block(g, -m);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex s) {
  for (auto& [g, m] : blocks_) m *= s;
  prune();
  return *this;
}

double AlgebraElement::distance(const AlgebraElement& o) const {
  double d = 0.0;
  for (const auto& [g, m] : blocks_) d = std::max(d, (m - o.block(g)).norm());
  for (const auto& [g, m] : o.blocks_)
    if (!blocks_.count(g)) d = std::max(d, m.norm());
  return d;
}

void AlgebraElement::prune() {
  for (auto it = blocks_.begin(); it != blocks_.end();) {
    if (it->second.norm() < kPruneTol)
      it = blocks_.erase(it);
    else
      ++it;
  }
}

AlgebraElement convolve(const AlgebraElement& f, const AlgebraElement& g) {
  if (f.fiber_dim_ != g.fiber_dim_)
    throw std::invalid_argument("convolve: fiber dimension mismatch");
  if (f.mult_ != g.mult_) throw std::invalid_argument("convolve: multiplier mismatch");
  AlgebraElement out(f.mult_, f.fiber_dim_);
  for (const auto& [a, fa] : f.blocks_) {
    for (const auto& [b, gb] : g.blocks_) {
      Complex phase = f.mult_.sigma_bar(a, b);
      out.add_block(group_add(a, b), phase * (fa * gb));
    }
  }
  out.prune();
  return out;
}

AlgebraElement involute(const AlgebraElement& f) {
  AlgebraElement out(f.mult_, f.fiber_dim_);
  for (const auto& [g, m] : f.blocks_) {
    GroupElem h = group_neg(g);
    out.set_block(h, f.mult_.sigma(g, h) * m.adjoint());
  }
  return out;
}

Complex trace_gamma(const AlgebraElement& f) {
  return f.block(group_zero(f.rank())).trace();
}

double nu_norm(const AlgebraElement& f, int k) {
  if (f.fiber_dim() != 1)
    throw std::invalid_argument("nu_norm: scalar fiber required (use block_nu_norm)");
  if (k < 0) throw std::invalid_argument("nu_norm: k must be >= 0");
  return block_nu_norm(f, k);
}

double block_nu_norm(const AlgebraElement& a, int k) {
  if (k < 0) throw std::invalid_argument("block_nu_norm: k must be >= 0");
  GroupSpec grp(a.rank());
  double s = 0.0;
  for (const auto& [g, m] : a.blocks()) {
    double w = 1.0 + static_cast<double>(grp.length(g));
    double wk = std::pow(w, 2 * k);
    s += wk * m.squaredNorm();
  }
  return std::sqrt(s);
}

std::pair<double, double> norm_bounds(const AlgebraElement& a) {
  double lo = 0.0, up = 0.0;
  for (const auto& [g, m] : a.blocks()) {
    double opn = m.jacobiSvd().singularValues()(0);
    lo = std::max(lo, opn);
    up += opn;
  }
  return {lo, up};
}

Matrix truncated_regular_representation(const AlgebraElement& f, std::int64_t radius) {
  GroupSpec grp(f.rank());
  // Enumerate the l^1 ball of the given radius in lexicographic order.
  std::vector<GroupElem> ball;
  GroupElem cur(static_cast<size_t>(f.rank()), 0);
  std::function<void(int)> rec = [&](int pos) {
    if (pos == f.rank()) {
      if (grp.length(cur) <= radius) ball.push_back(cur);
      return;
    }
    for (std::int64_t v = -radius; v <= radius; ++v) {
      cur[static_cast<size_t>(pos)] = v;
      rec(pos + 1);
    }
  };
  rec(0);
  std::map<GroupElem, size_t> index;
  for (size_t i = 0; i < ball.size(); ++i) index[ball[i]] = i;

  const int N = f.fiber_dim();
  Matrix T = Matrix::Zero(static_cast<Eigen::Index>(ball.size()) * N,
                          static_cast<Eigen::Index>(ball.size()) * N);
  for (size_t j = 0; j < ball.size(); ++j) {
    for (const auto& [a, fa] : f.blocks()) {
      GroupElem tgt = group_add(a, ball[j]);
      auto it = index.find(tgt);
      if (it == index.end()) continue;
      Complex phase = f.multiplier().sigma_bar(a, ball[j]);
      T.block(static_cast<Eigen::Index>(it->second) * N, static_cast<Eigen::Index>(j) * N, N, N) +=
          phase * fa;
    }
  }
  return T;
}

namespace {

void write_double(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << buf;
}

}  // namespace

void serialize(const AlgebraElement& f, std::ostream& os) {
  os << "gapkit-algebra-element v1\n";
  os << "rank " << f.rank() << "\n";
  os << "fiber " << f.fiber_dim() << "\n";
  os << "blocks " << f.blocks().size() << "\n";
  for (const auto& [g, m] : f.blocks()) {
    for (size_t i = 0; i < g.size(); ++i) os << (i ? " " : "") << g[i];
    os << " :";
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        os << " ";
        write_double(os, m(r, c).real());
        os << ",";
        write_double(os, m(r, c).imag());
      }
    os << "\n";
  }
}

AlgebraElement deserialize(std::istream& is, const Multiplier& mult) {
  std::string header;
  std::getline(is, header);
  if (header != "gapkit-algebra-element v1")
    throw std::runtime_error("deserialize: unrecognized header");
  std::string key;
  int rank = 0, fiber = 0;
  size_t nblocks = 0;
  is >> key >> rank;
  if (key != "rank") throw std::runtime_error("deserialize: expected rank");
  is >> key >> fiber;
  if (key != "fiber") throw std::runtime_error("deserialize: expected fiber");
  is >> key >> nblocks;
  if (key != "blocks") throw std::runtime_error("deserialize: expected blocks");
  if (rank != mult.rank()) throw std::runtime_error("deserialize: multiplier rank mismatch");

  AlgebraElement out(mult, fiber);
  for (size_t b = 0; b < nblocks; ++b) {
    GroupElem g(static_cast<size_t>(rank));
    for (auto& v : g) is >> v;
    std::string colon;
    is >> colon;
    if (colon != ":") throw std::runtime_error("deserialize: malformed block row");
    Matrix m(fiber, fiber);
    for (Eigen::Index r = 0; r < fiber; ++r)
      for (Eigen::Index c = 0; c < fiber; ++c) {
        std::string tok;
        is >> tok;
        auto comma = tok.find(',');
        if (comma == std::string::npos) throw std::runtime_error("deserialize: bad complex pair");
        m(r, c) = Complex(std::strtod(tok.substr(0, comma).c_str(), nullptr),
                          std::strtod(tok.substr(comma + 1).c_str(), nullptr));
      }
    out.set_block(g, m);
  }
  return out;
}

}  // namespace gapkit
