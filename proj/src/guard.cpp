#include "prexpect/guard.hpp"

#include "prexpect/errors.hpp"

namespace prexpect {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyPolyhedron: return "EmptyPolyhedron";
    case ErrorKind::TooManyGuards: return "TooManyGuards";
    case ErrorKind::NonAffineAssignment: return "NonAffineAssignment";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::RegionMismatch: return "RegionMismatch";
    case ErrorKind::InfeasibleSandwich: return "InfeasibleSandwich";
    case ErrorKind::SoundnessCheck: return "SoundnessCheck";
    case ErrorKind::StateBoxEscape: return "StateBoxEscape";
    case ErrorKind::PostNotLinear: return "PostNotLinear";
  }
  return "Error";
}

Guard Guard::truth(bool value) {
  Guard g;
  g.kind_ = value ? Kind::True : Kind::False;
  return g;
}

Guard Guard::atom(LinExpr expr, Cmp cmp) {
  Guard g;
  g.kind_ = Kind::Atom;
  g.expr_ = std::move(expr);
  g.cmp_ = cmp;
  return g;
}

Guard Guard::negation(Guard inner) {
  Guard g;
  g.kind_ = Kind::Not;
  g.children_.push_back(std::move(inner));
  return g;
}

Guard Guard::conjunction(std::vector<Guard> parts) {
  if (parts.size() == 1) return std::move(parts[0]);
  Guard g;
  g.kind_ = Kind::And;
  g.children_ = std::move(parts);
  return g;
}

Guard Guard::disjunction(std::vector<Guard> parts) {
  if (parts.size() == 1) return std::move(parts[0]);
  Guard g;
  g.kind_ = Kind::Or;
  g.children_ = std::move(parts);
  return g;
}

bool Guard::evaluate(const State& s) const {
  switch (kind_) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Atom: {
      Rational v = expr_.evaluate(s);
      switch (cmp_) {
        case Cmp::Le: return v <= 0;
        case Cmp::Lt: return v < 0;
        case Cmp::Eq: return v == 0;
        case Cmp::Ne: return v != 0;
      }
      return false;
    }
    case Kind::Not: return !children_[0].evaluate(s);
    case Kind::And:
      for (const auto& c : children_)
        if (!c.evaluate(s)) return false;
      return true;
    case Kind::Or:
      for (const auto& c : children_)
        if (c.evaluate(s)) return true;
      return false;
  }
  return false;
}

namespace {

Region single(const LinExpr& e, Rel rel) {
  return prune_empty(Region{{Polyhedron({LinConstraint{e, rel}})}});
}

}  // namespace

Region Guard::dnf(bool positive, std::size_t cap) const {
  switch (kind_) {
    case Kind::True: return positive ? Region::universe() : Region::empty();
    case Kind::False: return positive ? Region::empty() : Region::universe();
    case Kind::Atom: {
      Cmp c = cmp_;
      if (!positive) {
        switch (c) {
          case Cmp::Le: return single(-expr_, Rel::Lt);
          case Cmp::Lt: return single(-expr_, Rel::Le);
          case Cmp::Eq: c = Cmp::Ne; break;
          case Cmp::Ne: c = Cmp::Eq; break;
        }
      }
      switch (c) {
        case Cmp::Le: return single(expr_, Rel::Le);
        case Cmp::Lt: return single(expr_, Rel::Lt);
        case Cmp::Eq: return single(expr_, Rel::Eq);
        case Cmp::Ne: {
          Region r = single(expr_, Rel::Lt);
          Region other = single(-expr_, Rel::Lt);
          r.disjuncts.insert(r.disjuncts.end(), other.disjuncts.begin(), other.disjuncts.end());
          return r;
        }
      }
      return Region::empty();
    }
    case Kind::Not: return children_[0].dnf(!positive, cap);
    case Kind::And:
    case Kind::Or: {
      bool conj = (kind_ == Kind::And) == positive;
      if (!conj) {
        Region out;
        for (const auto& child : children_) {
          Region part = child.dnf(positive, cap);
          out.disjuncts.insert(out.disjuncts.end(), part.disjuncts.begin(), part.disjuncts.end());
          if (out.disjuncts.size() > cap)
            throw Error(ErrorKind::TooManyGuards, "disjunctive normal form exceeds the cap");
        }
        return out;
      }
      Region acc = Region::universe();
      for (const auto& child : children_) {
        Region part = child.dnf(positive, cap);
        if (acc.disjuncts.size() * part.disjuncts.size() > cap)
          throw Error(ErrorKind::TooManyGuards, "disjunctive normal form exceeds the cap");
        acc = intersect(acc, part);
        if (acc.disjuncts.empty()) break;
      }
      return acc;
    }
  }
  return Region::empty();
}

Region Guard::to_region(std::size_t max_disjuncts) const { return dnf(true, max_disjuncts); }

Region Guard::negated_region(std::size_t max_disjuncts) const {
  return dnf(false, max_disjuncts);
}

std::string Guard::to_string() const {
  switch (kind_) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::Atom: {
      const char* op = cmp_ == Cmp::Le ? " <= 0"
                       : cmp_ == Cmp::Lt ? " < 0"
                       : cmp_ == Cmp::Eq ? " = 0"
                                         : " != 0";
      return expr_.to_string() + op;
    }
    case Kind::Not: return "!(" + children_[0].to_string() + ")";
    case Kind::And:
    case Kind::Or: {
      std::string out = "(";
      for (std::size_t i = 0; i < children_.size(); ++i) {
        if (i) out += kind_ == Kind::And ? " && " : " || ";
        out += children_[i].to_string();
      }
      return out + ")";
    }
  }
  return "true";
}

bool operator==(const Guard& a, const Guard& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == Guard::Kind::Atom) return a.cmp_ == b.cmp_ && a.expr_ == b.expr_;
  return a.children_ == b.children_;
}

}  // namespace prexpect
