#include "hypercover/oracle.hpp"

#include <algorithm>
#include <string>

#include "hypercover/errors.hpp"

namespace hypercover::oracle {

namespace {

using Clock = std::chrono::steady_clock;

std::chrono::microseconds since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start);
}

class CoverSearch {
 public:
  explicit CoverSearch(const Hypergraph& h) : h_(h), chosen_(h.num_vertices(), 0), banned_(h.num_vertices(), 0) {}

  void run() {
    best_weight_ = h_.total_weight(all_vertices());
    best_ = all_vertices();
    BigInt current = 0;
    branch(current);
  }

  const std::vector<VertexIndex>& best() const { return best_; }
  const BigInt& best_weight() const { return best_weight_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  std::vector<VertexIndex> all_vertices() const {
    std::vector<VertexIndex> all;
    for (VertexIndex v = 0; v < h_.num_vertices(); ++v) {
      if (!h_.inert(v)) all.push_back(v);
    }
    return all;
  }

  bool covered(EdgeIndex e) const {
    const auto members = h_.edge(e);
    return std::any_of(members.begin(), members.end(), [&](VertexIndex v) { return chosen_[v] != 0; });
  }

  /// Sum over a greedy family of pairwise disjoint uncovered edges of the
  /// cheapest allowed member; any cover pays at least this much more.
  BigInt lower_bound(bool& dead_end, EdgeIndex& branch_edge) const {
    BigInt bound = 0;
    std::vector<char> used(h_.num_vertices(), 0);
    bool found = false;
    std::size_t fewest = ~std::size_t{0};
    for (EdgeIndex e = 0; e < h_.num_edges(); ++e) {
      if (covered(e)) continue;
      std::size_t options = 0;
      for (VertexIndex v : h_.edge(e)) options += banned_[v] == 0;
      if (options == 0) {
        dead_end = true;
        return bound;
      }
      if (!found || options < fewest) {
        fewest = options;
        branch_edge = e;
        found = true;
      }
      const auto members = h_.edge(e);
      if (std::any_of(members.begin(), members.end(), [&](VertexIndex v) { return used[v] != 0; })) continue;
      BigInt cheapest = -1;
      for (VertexIndex v : members) {
        used[v] = 1;
        if (banned_[v] == 0 && (cheapest < 0 || h_.weight(v) < cheapest)) cheapest = h_.weight(v);
      }
      bound += cheapest;
    }
    if (!found) branch_edge = static_cast<EdgeIndex>(h_.num_edges());
    return bound;
  }

  void branch(BigInt& current) {
    ++nodes_;
    bool dead_end = false;
    EdgeIndex e = 0;
    const BigInt bound = lower_bound(dead_end, e);
    if (dead_end || current + bound >= best_weight_) return;
    if (e == h_.num_edges()) {
      record(current);
      return;
    }
    std::vector<VertexIndex> tried;
    for (VertexIndex v : h_.edge(e)) {
      if (banned_[v] != 0) continue;
      chosen_[v] = 1;
      current += h_.weight(v);
      branch(current);
      current -= h_.weight(v);
      chosen_[v] = 0;
      // Later branches exclude v: covers containing v were explored above.
      banned_[v] = 1;
      tried.push_back(v);
    }
    for (VertexIndex v : tried) banned_[v] = 0;
  }

  void record(const BigInt& weight) {
    best_weight_ = weight;
    best_.clear();
    for (VertexIndex v = 0; v < h_.num_vertices(); ++v) {
      if (chosen_[v] != 0) best_.push_back(v);
    }
  }

  const Hypergraph& h_;
  std::vector<char> chosen_;
  std::vector<char> banned_;
  std::vector<VertexIndex> best_;
  BigInt best_weight_;
  std::uint64_t nodes_ = 0;
};

void verify_assignment(const ilp::CoveringILP& p, const std::vector<BigInt>& x, const Rational& value) {
  if (!ilp::is_feasible(p, x) || ilp::objective(p, x) != value) {
    throw Error(ErrorCode::InvariantViolation, "oracle witness failed re-verification");
  }
}

}  // namespace

ExactSolution exact_mwhvc(const Hypergraph& h, std::size_t vertex_limit) {
  if (h.num_vertices() > vertex_limit) {
    throw Error(ErrorCode::TooLarge, std::to_string(h.num_vertices()) + " vertices exceed the oracle limit of " +
                                         std::to_string(vertex_limit));
  }
  const auto start = Clock::now();
  CoverSearch search(h);
  search.run();
  ExactSolution out;
  out.cover = search.best();
  out.value = Rational(search.best_weight());
  out.search_nodes = search.nodes();
  if (!is_cover_indices(h, out.cover) || h.total_weight(out.cover) != search.best_weight()) {
    throw Error(ErrorCode::InvariantViolation, "oracle cover failed re-verification");
  }
  out.assignment.assign(h.num_vertices(), 0);
  for (VertexIndex v : out.cover) out.assignment[v] = 1;
  out.elapsed = since(start);
  return out;
}

ExactSolution exact_zo(const ilp::ZeroOneProgram& zo, std::size_t var_limit) {
  const ilp::CoveringILP& p = zo.program;
  const std::size_t n = p.num_vars();
  if (n > var_limit) {
    throw Error(ErrorCode::TooLarge, std::to_string(n) + " variables exceed the oracle limit of " +
                                         std::to_string(var_limit));
  }
  const auto start = Clock::now();
  ExactSolution out;
  out.feasible = false;
  std::vector<BigInt> x(n, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    ++out.search_nodes;
    for (std::size_t j = 0; j < n; ++j) x[j] = (mask >> j) & 1;
    if (!ilp::is_feasible(p, x)) continue;
    const Rational value = ilp::objective(p, x);
    if (!out.feasible || value < out.value) {
      out.feasible = true;
      out.value = value;
      out.assignment = x;
    }
  }
  if (out.feasible) {
    verify_assignment(p, out.assignment, out.value);
    for (std::uint32_t j = 0; j < n; ++j) {
      if (out.assignment[j] != 0) out.cover.push_back(j);
    }
  }
  out.elapsed = since(start);
  return out;
}

ExactSolution exact_ilp(const ilp::CoveringILP& program, const BigInt& box, std::size_t var_limit,
                        std::uint64_t value_limit) {
  const std::size_t n = program.num_vars();
  if (n > var_limit) {
    throw Error(ErrorCode::TooLarge, std::to_string(n) + " variables exceed the oracle limit of " +
                                         std::to_string(var_limit));
  }
  if (box < 0) throw Error(ErrorCode::BadInput, "box bound must be non-negative");
  BigInt points = 1;
  for (std::size_t j = 0; j < n; ++j) points *= box + 1;
  if (points > BigInt(std::to_string(value_limit))) {
    throw Error(ErrorCode::TooLarge, "box has " + points.get_str() + " points, limit " + std::to_string(value_limit));
  }
  const auto start = Clock::now();
  ExactSolution out;
  out.feasible = false;
  std::vector<BigInt> x(n, 0);
  while (true) {
    ++out.search_nodes;
    if (ilp::is_feasible(program, x)) {
      const Rational value = ilp::objective(program, x);
      if (!out.feasible || value < out.value) {
        out.feasible = true;
        out.value = value;
        out.assignment = x;
      }
    }
    std::size_t j = 0;
    while (j < n && x[j] == box) x[j++] = 0;
    if (j == n) break;
    ++x[j];
  }
  if (!out.feasible) throw Error(ErrorCode::Infeasible, "no point of the box is feasible");
  verify_assignment(program, out.assignment, out.value);
  for (std::uint32_t j = 0; j < n; ++j) {
    if (out.assignment[j] != 0) out.cover.push_back(j);
  }
  out.elapsed = since(start);
  return out;
}

}  // namespace hypercover::oracle
