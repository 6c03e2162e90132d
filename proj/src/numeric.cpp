#include "ct/numeric.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "ct/errors.hpp"

namespace ct {

double wrap_coord(double x, double period) {
  double y = std::fmod(x, period);
  if (y < 0.0) y += period;
  // fmod of a tiny negative can land exactly on `period` after the shift.
  if (y >= period) y = 0.0;
  return y;
}

Vec wrap_point(const Vec& x, const Vec& periods) {
  Vec y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = wrap_coord(x[i], periods[i]);
  return y;
}

double circle_distance(double a, double b, double period) {
  double d = std::fabs(wrap_coord(a, period) - wrap_coord(b, period));
  return std::min(d, period - d);
}

double torus_distance(const Vec& a, const Vec& b, const Vec& periods) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double d = circle_distance(a[i], b[i], periods[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

int worker_count(int configured) {
  if (const char* env = std::getenv("CONTACT_THERMO_THREADS")) {
    int k = std::atoi(env);
    if (k > 0) return k;
  }
  if (configured > 0) return configured;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {
constexpr std::size_t kChunk = 4096;
}

double deterministic_sum(std::size_t count, const std::function<double(std::size_t)>& fn,
                         int threads) {
  if (count == 0) return 0.0;
  const std::size_t nchunks = (count + kChunk - 1) / kChunk;
  std::vector<double> chunk_sums(nchunks, 0.0);

  int workers = worker_count(threads);
  if (static_cast<std::size_t>(workers) > nchunks) workers = static_cast<int>(nchunks);

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;

  auto run = [&](std::exception_ptr& err) {
    std::vector<double> buf(kChunk);
    try {
      for (;;) {
        std::size_t c = next.fetch_add(1);
        if (c >= nchunks) break;
        std::size_t lo = c * kChunk;
        std::size_t hi = std::min(lo + kChunk, count);
        for (std::size_t i = lo; i < hi; ++i) buf[i - lo] = fn(i);
        chunk_sums[c] = pairwise_sum(buf.data(), hi - lo);
      }
    } catch (...) {
      err = std::current_exception();
    }
  };

  if (workers <= 1) {
    run(first_error);
  } else {
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back(run, std::ref(errs[static_cast<std::size_t>(w)]));
    for (auto& t : pool) t.join();
    for (auto& e : errs)
      if (e && !first_error) first_error = e;
  }
  if (first_error) std::rethrow_exception(first_error);
  return pairwise_sum(chunk_sums);
}

}  // namespace ct
