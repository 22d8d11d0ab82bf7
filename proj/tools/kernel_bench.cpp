// Times the serial and OpenMP variants of the simplex kernels and checks they agree bit for bit.
#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <vector>

#include "pdra/lp/kernels.hpp"

namespace k = pdra::lp::kernels;

namespace {

double seconds(const std::function<void()>& fn, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs OpenMP kernel benchmark"};
  int n = 600;
  int cols = 4000;
  int reps = 20;
  unsigned seed = 1;
  app.add_option("--n", n, "basis dimension")->check(CLI::Range(8, 5000));
  app.add_option("--cols", cols, "structural columns")->check(CLI::Range(8, 200000));
  app.add_option("--reps", reps, "repetitions per kernel")->check(CLI::Range(1, 10000));
  app.add_option("--seed", seed, "RNG seed");
  CLI11_PARSE(app, argc, argv);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> inv(static_cast<size_t>(n) * n);
  for (auto& v : inv) v = u(rng);
  std::vector<double> alpha(n), weights(n);
  for (auto& v : alpha) v = u(rng);
  for (auto& v : weights) v = u(rng);
  alpha[n / 2] = 1.5;

  // Sparse matrix with about 6 entries per column.
  std::vector<int> col_start{0}, row_index;
  std::vector<double> values, cost(cols), y(n);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int j = 0; j < cols; ++j) {
    for (int e = 0; e < 6; ++e) {
      row_index.push_back(pick(rng));
      values.push_back(u(rng));
    }
    col_start.push_back(static_cast<int>(row_index.size()));
    cost[j] = u(rng);
  }
  for (auto& v : y) v = u(rng);
  std::vector<int> srows(row_index.begin(), row_index.begin() + 6);
  std::vector<double> svals(values.begin(), values.begin() + 6);

  std::printf("threads=%d n=%d cols=%d reps=%d\n", omp_get_max_threads(), n, cols, reps);
  std::printf("%-20s %12s %12s %9s %s\n", "kernel", "serial_s", "parallel_s", "speedup", "bitwise");
  bool all_equal = true;
  auto report = [&](const char* name, double ts, double tp, bool eq) {
    all_equal = all_equal && eq;
    std::printf("%-20s %12.6f %12.6f %9.2f %s\n", name, ts, tp, ts / tp, eq ? "equal" : "DIFFER");
  };

  {
    std::vector<double> a = inv, b = inv;
    k::DenseView va{a.data(), n}, vb{b.data(), n};
    const double ts = seconds([&] { k::pivot_update(va, n / 2, alpha, k::Mode::kSerial); }, reps);
    const double tp = seconds([&] { k::pivot_update(vb, n / 2, alpha, k::Mode::kParallel); }, reps);
    report("pivot_update", ts, tp, same_bits(a, b));
  }
  {
    std::vector<double> a(n), b(n);
    k::DenseView v{inv.data(), n};
    const double ts = seconds([&] { k::weighted_row_sum(v, weights, a, k::Mode::kSerial); }, reps);
    const double tp = seconds([&] { k::weighted_row_sum(v, weights, b, k::Mode::kParallel); }, reps);
    report("weighted_row_sum", ts, tp, same_bits(a, b));
  }
  {
    std::vector<double> a(n), b(n);
    k::DenseView v{inv.data(), n};
    k::SparseColumn col{srows, svals};
    const double ts = seconds([&] { k::apply_to_sparse(v, col, a, k::Mode::kSerial); }, reps);
    const double tp = seconds([&] { k::apply_to_sparse(v, col, b, k::Mode::kParallel); }, reps);
    report("apply_to_sparse", ts, tp, same_bits(a, b));
  }
  {
    std::vector<double> a(cols), b(cols);
    const double ts = seconds(
        [&] { k::reduced_costs(col_start, row_index, values, cost, y, a, k::Mode::kSerial); }, reps);
    const double tp = seconds(
        [&] { k::reduced_costs(col_start, row_index, values, cost, y, b, k::Mode::kParallel); }, reps);
    report("reduced_costs", ts, tp, same_bits(a, b));
  }
  {
    std::vector<double> a(cols), b(cols);
    const double ts = seconds(
        [&] { k::row_times_columns(col_start, row_index, values, y, a, k::Mode::kSerial); }, reps);
    const double tp = seconds(
        [&] { k::row_times_columns(col_start, row_index, values, y, b, k::Mode::kParallel); }, reps);
    report("row_times_columns", ts, tp, same_bits(a, b));
  }
  return all_equal ? 0 : 1;
}
