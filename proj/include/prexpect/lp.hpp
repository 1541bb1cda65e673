#pragma once

#include "prexpect/rational.hpp"

#include <utility>
#include <vector>

/// Small exact-rational linear programming facility: a dense two-phase
/// tableau simplex with Bland's anticycling rule. Sized for the tens of
/// variables and constraints that dominance and plane-synthesis queries
/// produce; pivoting is deterministic so equal inputs give equal optima.
namespace prexpect::lp {

/// Sparse linear form Σ coeff·x[index].
using Form = std::vector<std::pair<int, Rational>>;

enum class Sense { Le, Ge, Eq };
enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  std::vector<Rational> x;  // one value per problem variable
  Rational objective = 0;  // value of the objective as given
};

class Problem {
 public:
  /// Returns the index of the new variable.
  int add_var(bool nonneg = true);
  int num_vars() const { return static_cast<int>(nonneg_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  void add_row(Form form, Sense sense, Rational rhs);
  void maximize(Form form) {
    objective_ = std::move(form);
    negated_ = false;
  }
  void minimize(Form form);

  Result solve() const;

 private:
  struct Row {
    Form form;
    Sense sense;
    Rational rhs;
  };
  std::vector<bool> nonneg_;
  std::vector<Row> rows_;
  Form objective_;
  bool negated_ = false;
};

}  // namespace prexpect::lp
