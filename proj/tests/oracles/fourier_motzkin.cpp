#include "oracles/fourier_motzkin.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace oracle {

namespace {

// coeffs . alpha <= rhs, stored as coeffs followed by rhs.
using Row = std::vector<std::int64_t>;

constexpr std::int64_t kLimit = std::int64_t{1} << 40;

void normalize(Row& r) {
  std::int64_t g = 0;
  for (auto v : r) g = std::gcd(g, v < 0 ? -v : v);
  if (g > 1)
    for (auto& v : r) v /= g;
  for (auto v : r)
    if (v > kLimit || v < -kLimit) throw std::overflow_error("fourier-motzkin coefficient overflow");
}

}  // namespace

bool fm_feasible(const std::vector<std::vector<std::int64_t>>& d, const std::vector<std::int64_t>& b,
                 const std::vector<srnorder::Sign>& signs) {
  const std::size_t n = signs.size();
  std::vector<Row> rows;
  for (std::size_t i = 0; i < d.size(); ++i) {
    Row le(d[i].begin(), d[i].end());
    le.push_back(b[i]);
    Row ge = le;
    for (auto& v : ge) v = -v;
    rows.push_back(std::move(le));
    rows.push_back(std::move(ge));
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (signs[k] == srnorder::Sign::Free) continue;
    Row r(n + 1, 0);
    r[k] = signs[k] == srnorder::Sign::NonNeg ? -1 : 1;
    rows.push_back(std::move(r));
  }

  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Row> pos, neg, next;
    for (auto& r : rows) {
      if (r[k] > 0) pos.push_back(std::move(r));
      else if (r[k] < 0) neg.push_back(std::move(r));
      else next.push_back(std::move(r));
    }
    for (const auto& p : pos)
      for (const auto& q : neg) {
        Row c(n + 1);
        for (std::size_t j = 0; j <= n; ++j) c[j] = p[j] * -q[k] + q[j] * p[k];
        normalize(c);
        next.push_back(std::move(c));
      }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    rows = std::move(next);
  }
  return std::all_of(rows.begin(), rows.end(), [n](const Row& r) { return r[n] >= 0; });
}

}  // namespace oracle
