#include "ieig/planted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ieig {

PlantedProblem make_planted_problem(const PlantedOptions& opt) {
  const Index n = opt.n;
  if (n < 8) throw std::invalid_argument("planted problem needs n >= 8");
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> prob(0.0, 1.0);

  // Block layout of the triangular form: 1x1 blocks, plus 2x2 rotation blocks
  // (conjugate pairs) in the real case.
  std::vector<Index> block_start;
  for (Index i = 0; i < n;) {
    block_start.push_back(i);
    const bool pair = !opt.complex && i + 1 < n && prob(rng) < 0.15;
    i += pair ? 2 : 1;
  }
  const auto nblocks = block_start.size();
  auto block_size = [&](std::size_t b) {
    return (b + 1 < nblocks ? block_start[b + 1] : n) - block_start[b];
  };

  // Block "centers" on a jittered lattice so that eigenvalues stay separated.
  std::vector<Scalar> centers(nblocks);
  double spacing;
  if (opt.complex) {
    const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(nblocks))));
    spacing = 10.0 / static_cast<double>(side);
    for (std::size_t b = 0; b < nblocks; ++b) {
      const double x = -5.0 + spacing * (static_cast<double>(b % side) + 0.5 + 0.3 * unit(rng));
      const double y = -5.0 + spacing * (static_cast<double>(b / side) + 0.5 + 0.3 * unit(rng));
      centers[b] = {x, y};
    }
  } else {
    spacing = 20.0 / static_cast<double>(nblocks);
    for (std::size_t b = 0; b < nblocks; ++b) {
      centers[b] = -10.0 + spacing * (static_cast<double>(b) + 0.5 + 0.3 * unit(rng));
    }
  }
  std::shuffle(centers.begin(), centers.end(), rng);

  std::vector<Triplet> upper;
  std::vector<Scalar> eigenvalues;
  std::vector<Index> block_of(static_cast<std::size_t>(n));
  std::vector<bool> is_pair(nblocks, false);
  for (std::size_t b = 0; b < nblocks; ++b) {
    const Index s = block_start[b];
    for (Index k = 0; k < block_size(b); ++k) block_of[s + k] = static_cast<Index>(b);
    if (block_size(b) == 1) {
      upper.push_back({s, s, centers[b]});
      eigenvalues.push_back(centers[b]);
    } else {
      is_pair[b] = true;
      const double re = centers[b].real();
      const double im = spacing * (0.5 + 0.5 * std::abs(unit(rng))) * 3.0;
      upper.push_back({s, s, re});
      upper.push_back({s, s + 1, im});
      upper.push_back({s + 1, s, -im});
      upper.push_back({s + 1, s + 1, re});
      eigenvalues.push_back({re, im});
      eigenvalues.push_back({re, -im});
    }
  }

  const double scale = opt.coupling_scale * spacing;
  for (Index i = 0; i < n; ++i) {
    const std::size_t b = static_cast<std::size_t>(block_of[i]);
    const Index first = b + 1 < nblocks ? block_start[b + 1] : n;
    if (first >= n) continue;
    std::uniform_int_distribution<Index> col(first, n - 1);
    for (int k = 0; k < opt.couplings_per_row; ++k) {
      const Scalar v = opt.complex ? Scalar(scale * unit(rng), scale * unit(rng))
                                   : Scalar(scale * unit(rng), 0.0);
      upper.push_back({i, col(rng), v});
    }
  }

  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (auto& t : upper) {
    t.row = perm[t.row];
    t.col = perm[t.col];
  }

  // Target: a middle-of-the-spectrum eigenvalue from a 1x1 block.
  std::vector<std::size_t> candidates;
  for (std::size_t b = 0; b < nblocks; ++b) {
    if (is_pair[b]) continue;
    const Scalar c = centers[b];
    const bool interior = opt.complex ? (std::abs(c.real()) < 3.0 && std::abs(c.imag()) < 3.0)
                                      : std::abs(c.real()) < 6.0;
    if (interior) candidates.push_back(b);
  }
  if (candidates.empty()) throw std::runtime_error("planted problem has no interior target");
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  const Scalar target = centers[candidates[pick(rng)]];

  double gap = std::numeric_limits<double>::infinity();
  for (const auto& ev : eigenvalues) {
    if (ev != target) gap = std::min(gap, std::abs(ev - target));
  }
  const double phase = opt.complex ? std::numbers::pi * unit(rng) : (unit(rng) < 0 ? std::numbers::pi : 0.0);
  const Scalar sigma = target + 0.25 * gap * std::polar(1.0, phase);

  PlantedProblem p;
  p.matrix = SparseMatrix::from_triplets(n, std::move(upper));
  p.eigenvalues = std::move(eigenvalues);
  p.sigma = opt.complex ? sigma : Scalar(sigma.real(), 0.0);
  p.target = target;
  return p;
}

}  // namespace ieig
