#include "prexpect/lp.hpp"

#include <cassert>
#include <limits>

namespace prexpect::lp {

int Problem::add_var(bool nonneg) {
  nonneg_.push_back(nonneg);
  return num_vars() - 1;
}

void Problem::add_row(Form form, Sense sense, Rational rhs) {
  rows_.push_back({std::move(form), sense, std::move(rhs)});
}

void Problem::minimize(Form form) {
  for (auto& term : form) term.second = -term.second;
  objective_ = std::move(form);
  negated_ = true;
}

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : t_(rows, std::vector<Rational>(cols + 1)), obj_(cols + 1), basis_(rows, -1) {}

  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> obj_;  // reduced costs; last entry is -objective
  std::vector<int> basis_;

  std::size_t rhs() const { return obj_.size() - 1; }

  void pivot(std::size_t r, std::size_t c) {
    auto& prow = t_[r];
    Rational inv = 1 / prow[c];
    for (auto& v : prow)
      if (v != 0) v *= inv;
    Rational f;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == r || t_[i][c] == 0) continue;
      f = t_[i][c];
      eliminate(t_[i], prow, f);
    }
    if (obj_[c] != 0) {
      f = obj_[c];
      eliminate(obj_, prow, f);
    }
    basis_[r] = static_cast<int>(c);
  }

  static void eliminate(std::vector<Rational>& row, const std::vector<Rational>& prow,
                        const Rational& f) {
    for (std::size_t j = 0; j < row.size(); ++j)
      if (prow[j] != 0) row[j] -= f * prow[j];
  }

  void set_objective(const std::vector<Rational>& cost) {
    for (std::size_t j = 0; j < obj_.size(); ++j) obj_[j] = j < cost.size() ? cost[j] : Rational(0);
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const Rational& cb = obj_[basis_[i]];
      if (cb == 0) continue;
      Rational f = cb;
      eliminate(obj_, t_[i], f);
    }
  }

  /// Maximizes the current objective; columns >= allowed_cols never enter.
  /// Returns false when unbounded.
  bool optimize(std::size_t allowed_cols) {
    for (;;) {
      std::size_t enter = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (obj_[j] > 0) {
          enter = j;
          break;
        }
      }
      if (enter == allowed_cols) return true;
      std::size_t leave = t_.size();
      Rational best;
      for (std::size_t i = 0; i < t_.size(); ++i) {
        if (t_[i][enter] <= 0) continue;
        Rational ratio = t_[i][rhs()] / t_[i][enter];
        if (leave == t_.size() || ratio < best ||
            (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == t_.size()) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

Result Problem::solve() const {
  // Column layout: structural columns (free variables split in two), slack
  // and surplus columns, then artificials.
  std::vector<int> pos_col(nonneg_.size()), neg_col(nonneg_.size(), -1);
  std::size_t ncols = 0;
  for (std::size_t v = 0; v < nonneg_.size(); ++v) {
    pos_col[v] = static_cast<int>(ncols++);
    if (!nonneg_[v]) neg_col[v] = static_cast<int>(ncols++);
  }

  struct StdRow {
    std::vector<std::pair<std::size_t, Rational>> entries;
    Sense sense;
    Rational rhs;
  };
  std::vector<StdRow> std_rows;
  std_rows.reserve(rows_.size());
  for (const auto& row : rows_) {
    StdRow sr{{}, row.sense, row.rhs};
    bool flip = row.rhs < 0;
    for (const auto& [v, c] : row.form) {
      if (c == 0) continue;
      Rational k = flip ? Rational(-c) : c;
      sr.entries.emplace_back(pos_col[v], k);
      if (neg_col[v] >= 0) sr.entries.emplace_back(neg_col[v], Rational(-k));
    }
    if (flip) {
      sr.rhs = -sr.rhs;
      if (sr.sense == Sense::Le)
        sr.sense = Sense::Ge;
      else if (sr.sense == Sense::Ge)
        sr.sense = Sense::Le;
    }
    std_rows.push_back(std::move(sr));
  }

  std::size_t n_slack = 0, n_art = 0;
  for (const auto& sr : std_rows) {
    if (sr.sense != Sense::Eq) ++n_slack;
    if (sr.sense != Sense::Le) ++n_art;
  }
  const std::size_t slack_base = ncols;
  const std::size_t art_base = ncols + n_slack;
  const std::size_t total = art_base + n_art;

  Tableau tab(std_rows.size(), total);
  std::size_t next_slack = slack_base, next_art = art_base;
  for (std::size_t i = 0; i < std_rows.size(); ++i) {
    auto& row = tab.t_[i];
    for (const auto& [c, k] : std_rows[i].entries) row[c] += k;
    row[total] = std_rows[i].rhs;
    switch (std_rows[i].sense) {
      case Sense::Le:
        row[next_slack] = 1;
        tab.basis_[i] = static_cast<int>(next_slack++);
        break;
      case Sense::Ge:
        row[next_slack++] = -1;
        row[next_art] = 1;
        tab.basis_[i] = static_cast<int>(next_art++);
        break;
      case Sense::Eq:
        row[next_art] = 1;
        tab.basis_[i] = static_cast<int>(next_art++);
        break;
    }
  }

  Result result;
  if (n_art > 0) {
    std::vector<Rational> phase1(total);
    for (std::size_t j = art_base; j < total; ++j) phase1[j] = -1;
    tab.set_objective(phase1);
    tab.optimize(total);
    if (tab.obj_[total] != 0) {  // optimum of -Σ artificials is below zero
      result.status = Status::Infeasible;
      return result;
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < tab.t_.size();) {
      if (static_cast<std::size_t>(tab.basis_[i]) < art_base) {
        ++i;
        continue;
      }
      std::size_t col = art_base;
      for (std::size_t j = 0; j < art_base; ++j) {
        if (tab.t_[i][j] != 0) {
          col = j;
          break;
        }
      }
      if (col == art_base) {
        tab.t_.erase(tab.t_.begin() + static_cast<std::ptrdiff_t>(i));
        tab.basis_.erase(tab.basis_.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      tab.pivot(i, col);
      ++i;
    }
  }

  std::vector<Rational> cost(total);
  for (const auto& [v, c] : objective_) {
    cost[pos_col[v]] += c;
    if (neg_col[v] >= 0) cost[neg_col[v]] -= c;
  }
  tab.set_objective(cost);
  if (!tab.optimize(art_base)) {
    result.status = Status::Unbounded;
    return result;
  }

  std::vector<Rational> col_value(total);
  for (std::size_t i = 0; i < tab.t_.size(); ++i) col_value[tab.basis_[i]] = tab.t_[i][total];
  result.x.resize(nonneg_.size());
  for (std::size_t v = 0; v < nonneg_.size(); ++v) {
    result.x[v] = col_value[pos_col[v]];
    if (neg_col[v] >= 0) result.x[v] -= col_value[neg_col[v]];
  }
  result.objective = 0;
  for (const auto& [v, c] : objective_) result.objective += c * result.x[v];
  if (negated_) result.objective = -result.objective;
  result.status = Status::Optimal;
  return result;
}

}  // namespace prexpect::lp
