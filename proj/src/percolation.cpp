#include "mbqc/percolation.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace mbqc {

double Lattice::occupied_fraction() const {
  if (occupied.empty()) return 0.0;
  const double total = std::accumulate(occupied.begin(), occupied.end(), 0.0);
  return total / static_cast<double>(occupied.size());
}

Lattice sample_lattice(int side, double p_site, SplitMix64& rng) {
  if (side < 2) throw std::invalid_argument("lattice side must be >= 2");
  if (p_site < 0.0 || p_site > 1.0)
    throw std::invalid_argument("p_site must lie in [0, 1]");
  Lattice lat;
  lat.side = side;
  lat.occupied.resize(static_cast<std::size_t>(side) * side);
  for (std::uint8_t& cell : lat.occupied)
    cell = rng.bernoulli(p_site) ? 1 : 0;
  return lat;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

}  // namespace

bool spans(const Lattice& lattice) {
  const int side = lattice.side;
  const int left = side * side;
  const int right = left + 1;
  UnionFind uf(side * side + 2);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      if (!lattice.at(r, c)) continue;
      const int idx = r * side + c;
      if (c == 0) uf.unite(idx, left);
      if (c == side - 1) uf.unite(idx, right);
      if (c + 1 < side && lattice.at(r, c + 1)) uf.unite(idx, idx + 1);
      if (r + 1 < side && lattice.at(r + 1, c)) uf.unite(idx, idx + side);
    }
  }
  return uf.find(left) == uf.find(right);
}

PercolationEstimate spanning_probability(int side, double p_site, int trials,
                                         std::uint64_t seed, int threads) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, trials);

  auto run_trial = [&](int t) {
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(t));
    return spans(sample_lattice(side, p_site, rng));
  };

  int hits = 0;
  if (threads <= 1) {
    for (int t = 0; t < trials; ++t)
      if (run_trial(t)) ++hits;
  } else {
    std::atomic<int> shared_hits{0};
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        int local = 0;
        for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1))
          if (run_trial(t)) ++local;
        shared_hits += local;
      });
    for (std::thread& th : pool) th.join();
    hits = shared_hits.load();
  }

  PercolationEstimate est;
  est.p_site = p_site;
  est.side = side;
  est.trials = trials;
  est.seed = seed;
  est.spanning_probability = static_cast<double>(hits) / trials;
  est.std_error = std::sqrt(est.spanning_probability *
                            (1.0 - est.spanning_probability) / trials);
  return est;
}

double estimate_threshold(int side, int trials_per_point, std::uint64_t seed,
                          int threads) {
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const PercolationEstimate est = spanning_probability(
        side, mid, trials_per_point,
        SplitMix64::stream(seed, 1000 + iter).next(), threads);
    (est.spanning_probability < 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double deformed_p_site(double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("lambda must lie in [0, 1]");
  return 2.0 * lambda * lambda / (1.0 + lambda * lambda);
}

double deformed_threshold(double p_c) {
  if (p_c <= 0.0 || p_c >= 1.0)
    throw std::invalid_argument("p_c must lie in (0, 1)");
  return std::sqrt(p_c / (2.0 - p_c));
}

Lattice povm_hole_sampler(double lambda, int side, SplitMix64& rng) {
  return sample_lattice(side, deformed_p_site(lambda), rng);
}

}  // namespace mbqc
