#include "orbitprod/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

#include "orbitprod/blocksum.hpp"
#include "orbitprod/correction.hpp"
#include "orbitprod/exact.hpp"
#include "orbitprod/model.hpp"

namespace orbitprod {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool wants(const SweepOptions& options, const std::string& method) {
  return std::find(options.methods.begin(), options.methods.end(), method) !=
         options.methods.end();
}

// Runs `body` and turns any exception into an error row.
template <class Body>
void cell(std::vector<SweepRow>& rows, SweepRow row, Body&& body) {
  try {
    body(row);
  } catch (const std::exception& e) {
    row.log_z_per_node = row.error_per_node = row.bound_per_node = kNaN;
    row.status = std::string("error: ") + e.what();
  }
  rows.push_back(std::move(row));
}

std::vector<SweepRow> sweep_one(const SweepOptions& options, double r) {
  std::vector<SweepRow> rows;
  SweepRow base;
  base.r = r;
  base.rho_r = base.rho_rprime = kNaN;

  std::optional<NormalizedModel> normalized;
  std::optional<double> exact;
  std::optional<GaBPState> state;
  std::optional<BacktracklessMatrix> rp;
  std::string setup_error;
  double n = 0.0, arcs = 0.0;
  std::optional<int> g;
  try {
    normalized = normalize(gen_grid(options.rows, options.cols, r, options.periodic));
    const auto& w = normalized->weights;
    n = w.vertex_count();
    arcs = w.arc_count();
    g = girth(w.index);
    base.rho_r = spectral_radius_abs(w, options.power_tol, options.power_max_iter).rho_abs;
    state = run_gabp(w, std::nullopt, options.gabp);
    if (!state->converged) throw std::runtime_error("GaBP did not converge");
    rp.emplace(build_backtrackless(modified_weights(w, *state), w.index));
    base.rho_rprime = rho_prime(*rp, options.power_tol, options.power_max_iter).radius;
  } catch (const std::exception& e) {
    setup_error = e.what();
  }
  auto need_setup = [&] {
    if (!setup_error.empty()) throw std::runtime_error(setup_error);
  };
  auto need_exact = [&] {
    need_setup();
    if (!exact) exact = log_z_exact(normalized->weights);
  };
  auto set_error = [&](SweepRow& row, double log_z) {
    row.log_z_per_node = log_z / n;
    need_exact();
    row.error_per_node = std::abs(log_z - *exact) / n;
  };

  if (wants(options, "exact")) {
    cell(rows, base, [&](SweepRow& row) {
      row.method = "exact";
      need_exact();
      row.log_z_per_node = *exact / n;
      row.error_per_node = 0.0;
      row.bound_per_node = 0.0;
    });
  }
  if (wants(options, "gabp")) {
    cell(rows, base, [&](SweepRow& row) {
      row.method = "gabp";
      need_setup();
      row.bound_per_node = gabp_error_bound(base.rho_r, g);
      set_error(row, log_zbp(*state, normalized->weights));
    });
  }
  for (int L : options.block_sizes) {
    if (wants(options, "blocksum-R")) {
      cell(rows, base, [&](SweepRow& row) {
        row.method = "blocksum-R";
        row.L = L;
        need_setup();
        const auto family = grid_block_family(options.rows, options.cols, L, options.periodic);
        row.bound_per_node = blocksum_error_bound(base.rho_r, L);
        set_error(row, log_z_blocks(normalized->weights.matrix(), family));
      });
    }
    if (wants(options, "gabp+blocksum-Rprime")) {
      cell(rows, base, [&](SweepRow& row) {
        row.method = "gabp+blocksum-Rprime";
        row.L = L;
        need_setup();
        const auto nodes = grid_block_family(options.rows, options.cols, L, options.periodic);
        const auto family = induced_edge_family(nodes, normalized->weights.index);
        // R' has 2|E| rows, so the per-node bound carries the factor 2|E|/n.
        row.bound_per_node = arcs / n * blocksum_error_bound(base.rho_rprime, L);
        set_error(row, log_zbp(*state, normalized->weights) +
                           log_z_blocks(rp->matrix(), family));
      });
    }
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepOptions& options) {
  const std::size_t cells = options.r_values.size();
  std::vector<std::vector<SweepRow>> per_r(cells);
  unsigned workers = options.workers ? options.workers : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cells)));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < cells; k = next++) {
      per_r[k] = sweep_one(options, options.r_values[k]);
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
  }

  std::vector<SweepRow> rows;
  for (auto& chunk : per_r) {
    rows.insert(rows.end(), std::make_move_iterator(chunk.begin()),
                std::make_move_iterator(chunk.end()));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.r != b.r) return a.r < b.r;
    if (a.L != b.L) return a.L < b.L;
    return a.method < b.method;
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  auto real = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "r,L,method,log_z_per_node,error_per_node,bound_per_node,rho_R,rho_Rprime,status\n";
  for (const auto& row : rows) {
    std::string status = row.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << real(row.r) << ',' << row.L << ',' << row.method << ','
        << real(row.log_z_per_node) << ',' << real(row.error_per_node) << ','
        << real(row.bound_per_node) << ',' << real(row.rho_r) << ','
        << real(row.rho_rprime) << ',' << status << '\n';
  }
}

}  // namespace orbitprod
