#include "orbitprod/blocksum.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "orbitprod/errors.hpp"

namespace orbitprod {

namespace {

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool contains(const std::vector<int>& outer, const std::vector<int>& inner) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

}  // namespace

BlockFamily close_and_weight(std::vector<std::vector<int>> blocks, int ground_size,
                             int coverage_length) {
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> family;
  std::vector<std::vector<int>> by_item(ground_size);
  std::deque<int> pending;

  auto add = [&](std::vector<int> b) {
    if (b.empty() || !seen.insert(b).second) return;
    const int id = static_cast<int>(family.size());
    for (int item : b) {
      if (item < 0 || item >= ground_size) {
        throw std::invalid_argument("block item " + std::to_string(item) +
                                    " outside the ground set");
      }
      by_item[item].push_back(id);
    }
    family.push_back(std::move(b));
    pending.push_back(id);
  };

  for (auto& b : blocks) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    add(std::move(b));
  }

  std::vector<int> neighbours;
  while (!pending.empty()) {
    const int id = pending.front();
    pending.pop_front();
    neighbours.clear();
    for (int item : family[id]) {
      neighbours.insert(neighbours.end(), by_item[item].begin(), by_item[item].end());
    }
    std::sort(neighbours.begin(), neighbours.end());
    neighbours.erase(std::unique(neighbours.begin(), neighbours.end()), neighbours.end());
    for (int other : neighbours) {
      if (other != id) add(intersect(family[id], family[other]));
    }
  }

  // Strict supersets are strictly larger, so decreasing size is a valid order.
  std::sort(family.begin(), family.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  for (auto& list : by_item) list.clear();
  for (int id = 0; id < static_cast<int>(family.size()); ++id) {
    for (int item : family[id]) by_item[item].push_back(id);
  }

  BlockFamily out;
  out.ground_size = ground_size;
  out.coverage_length = coverage_length;
  out.weights.assign(family.size(), 0);
  for (int id = 0; id < static_cast<int>(family.size()); ++id) {
    long long above = 0;
    for (int other : by_item[family[id].front()]) {
      if (other < id && family[other].size() > family[id].size() &&
          contains(family[other], family[id])) {
        above += out.weights[other];
      }
    }
    out.weights[id] = 1 - above;
  }
  out.blocks = std::move(family);
  return out;
}

namespace {

std::vector<int> window_starts(int extent, int L, bool periodic) {
  const int stride = L / 2;
  std::vector<int> starts;
  if (periodic) {
    for (int p = 0; p < extent; p += stride) starts.push_back(p);
  } else {
    int p = 0;
    for (; p + L <= extent; p += stride) starts.push_back(p);
    if (starts.back() + L < extent) starts.push_back(extent - L);
  }
  return starts;
}

}  // namespace

BlockFamily grid_block_family(int rows, int cols, int L, bool periodic) {
  if (L < 2 || L % 2 != 0) throw InvalidModel("block length L must be even and >= 2");
  if (L > std::min(rows, cols)) throw InvalidModel("block length L exceeds the grid");
  if (periodic && (rows % (L / 2) != 0 || cols % (L / 2) != 0)) {
    throw InvalidModel("periodic grids need L/2 to divide rows and cols");
  }
  std::vector<std::vector<int>> windows;
  for (int r0 : window_starts(rows, L, periodic)) {
    for (int c0 : window_starts(cols, L, periodic)) {
      std::vector<int> block;
      block.reserve(L * L);
      for (int dr = 0; dr < L; ++dr) {
        for (int dc = 0; dc < L; ++dc) {
          block.push_back(((r0 + dr) % rows) * cols + (c0 + dc) % cols);
        }
      }
      windows.push_back(std::move(block));
    }
  }
  return close_and_weight(std::move(windows), rows * cols, L);
}

BlockFamily induced_edge_family(const BlockFamily& node_family, const ArcIndex& index) {
  std::vector<std::vector<int>> arc_blocks;
  std::vector<bool> inside(index.vertex_count(), false);
  for (const auto& block : node_family.blocks) {
    for (int v : block) inside[v] = true;
    std::vector<int> arcs;
    for (int v : block) {
      for (int a = index.out_begin(v); a < index.out_end(v); ++a) {
        if (inside[index.arc(a).to]) arcs.push_back(a);
      }
    }
    for (int v : block) inside[v] = false;
    arc_blocks.push_back(std::move(arcs));
  }
  return close_and_weight(std::move(arc_blocks), index.arc_count(),
                          node_family.coverage_length);
}

bool weight_identity_holds(const BlockFamily& family) {
  for (const auto& block : family.blocks) {
    long long sum = 0;
    for (std::size_t k = 0; k < family.blocks.size(); ++k) {
      if (contains(family.blocks[k], block)) sum += family.weights[k];
    }
    if (sum != 1) return false;
  }
  return true;
}

bool covered_by_family(const BlockFamily& family, std::vector<int> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return std::any_of(family.blocks.begin(), family.blocks.end(),
                     [&](const auto& block) { return contains(block, items); });
}

double log_z_blocks(const SparseMatrix& a, const BlockFamily& family,
                    Eigen::Index budget) {
  if (a.rows() != family.ground_size) {
    throw std::invalid_argument("block family ground set does not index the operator");
  }
  std::vector<int> position(a.rows(), -1);
  double total = 0.0;
  for (std::size_t k = 0; k < family.blocks.size(); ++k) {
    if (family.weights[k] == 0) continue;
    const auto& block = family.blocks[k];
    const auto size = static_cast<Eigen::Index>(block.size());
    if (size > budget) {
      throw ResourceLimit("block of size " + std::to_string(size) +
                          " exceeds the dense budget");
    }
    for (int p = 0; p < static_cast<int>(size); ++p) position[block[p]] = p;
    DenseMatrix m = DenseMatrix::Identity(size, size);
    for (int p = 0; p < static_cast<int>(size); ++p) {
      for (SparseMatrix::InnerIterator it(a, block[p]); it; ++it) {
        const int q = position[it.col()];
        if (q >= 0) m(p, q) -= it.value();
      }
    }
    for (int item : block) position[item] = -1;
    const LogDet ld = dense_logdet(m);
    if (ld.sign <= 0) {
      throw NumericalFailure("det(I - A_B) <= 0 for block " + std::to_string(k));
    }
    total += static_cast<double>(family.weights[k]) * -ld.log_abs;
  }
  return total;
}

double blocksum_error_bound(double rho, int L) {
  if (!(rho < 1.0)) throw std::invalid_argument("blocksum_error_bound: rho must be < 1");
  return std::pow(rho, L) / (L * (1.0 - rho));
}

}  // namespace orbitprod
