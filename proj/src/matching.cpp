/*
  Assignment problem via the Hungarian method with potentials, followed by a
  lexicographic canonicalization pass.

  With optimal potentials (u, v), a permutation is optimal iff it only uses
  tight entries (u[i] + v[j] == cost[i][j]). The canonical answer is therefore
  the lexicographically smallest perfect matching of the tight bipartite
  graph, found row by row with alternating-path feasibility checks.
*/
#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "topobench/traffic.hpp"

namespace topobench {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

}  // namespace

Matching max_weight_perfect_matching(const WeightMatrix& weights) {
  const int n = static_cast<int>(weights.size());
  double scale = 1.0;
  for (const auto& row : weights) {
    if (static_cast<int>(row.size()) != n) throw Error(Errc::NonSquare, "weight matrix must be square");
    for (double w : row) {
      if (!std::isfinite(w)) throw Error(Errc::InvalidParameter, "weights must be finite");
      scale = std::max(scale, std::abs(w));
    }
  }
  Matching out;
  if (n == 0) return out;

  // Minimize cost = -weight. 1-based arrays; column 0 is the virtual start.
  const auto cost = [&](int i, int j) { return -weights[idx(i)][idx(j)]; };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(idx(n) + 1, 0.0), v(idx(n) + 1, 0.0);
  std::vector<int> owner(idx(n) + 1, 0), way(idx(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    owner[0] = i;
    int j0 = 0;
    std::vector<double> minv(idx(n) + 1, inf);
    std::vector<char> used(idx(n) + 1, 0);
    do {
      used[idx(j0)] = 1;
      const int i0 = owner[idx(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[idx(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[idx(i0)] - v[idx(j)];
        if (cur < minv[idx(j)]) {
          minv[idx(j)] = cur;
          way[idx(j)] = j0;
        }
        if (minv[idx(j)] < delta) {
          delta = minv[idx(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[idx(j)]) {
          u[idx(owner[idx(j)])] += delta;
          v[idx(j)] -= delta;
        } else {
          minv[idx(j)] -= delta;
        }
      }
      j0 = j1;
    } while (owner[idx(j0)] != 0);
    do {
      const int j1 = way[idx(j0)];
      owner[idx(j0)] = owner[idx(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_col(idx(n)), col_row(idx(n));
  for (int j = 1; j <= n; ++j) {
    row_col[idx(owner[idx(j)] - 1)] = j - 1;
    col_row[idx(j - 1)] = owner[idx(j)] - 1;
  }
  const double tol = 1e-9 * scale;
  const auto tight = [&](int i, int j) {
    return std::abs(cost(i, j) - u[idx(i) + 1] - v[idx(j) + 1]) <= tol;
  };

  // Rows < i are fixed; they own exactly the fixed columns.
  for (int i = 0; i < n; ++i) {
    const int home = row_col[idx(i)];
    // Rows that can hand over their column and end a chain taking `home`.
    std::vector<int> next(idx(n), -2);  // -2: not reachable, -1: takes home directly
    std::queue<int> frontier;
    for (int r = i + 1; r < n; ++r) {
      if (tight(r, home)) {
        next[idx(r)] = -1;
        frontier.push(r);
      }
    }
    while (!frontier.empty()) {
      const int reached = frontier.front();
      frontier.pop();
      const int col = row_col[idx(reached)];
      for (int r = i + 1; r < n; ++r) {
        if (next[idx(r)] == -2 && tight(r, col)) {
          next[idx(r)] = reached;
          frontier.push(r);
        }
      }
    }
    for (int j = 0; j < home; ++j) {
      const int r = col_row[idx(j)];
      if (r <= i || next[idx(r)] == -2 || !tight(i, j)) continue;
      // Shift the chain r -> next[r] -> ... onto the columns of its successors.
      std::vector<int> chain{r};
      while (next[idx(chain.back())] != -1) chain.push_back(next[idx(chain.back())]);
      std::vector<int> new_cols;
      for (std::size_t c = 0; c + 1 < chain.size(); ++c) new_cols.push_back(row_col[idx(chain[c + 1])]);
      new_cols.push_back(home);
      row_col[idx(i)] = j;
      col_row[idx(j)] = i;
      for (std::size_t c = 0; c < chain.size(); ++c) {
        row_col[idx(chain[c])] = new_cols[c];
        col_row[idx(new_cols[c])] = chain[c];
      }
      break;
    }
  }

  out.target = row_col;
  for (int i = 0; i < n; ++i) out.total_weight += weights[idx(i)][idx(row_col[idx(i)])];
  return out;
}

}  // namespace topobench
