#pragma once

#include <cstddef>
#include <vector>

#include "cubicslice/angle.hpp"

namespace cubicslice {

// Chord of the circle with distinct endpoints, stored with a < b.
class Leaf {
 public:
  Leaf(Angle a, Angle b);
  const Angle& a() const { return a_; }
  const Angle& b() const { return b_; }
  bool has_endpoint(const Angle& t) const { return t == a_ || t == b_; }
  Leaf doubled() const;  // image under t -> 2t; throws if it collapses

  friend bool operator==(const Leaf&, const Leaf&) = default;
  friend auto operator<=>(const Leaf& x, const Leaf& y) {
    if (auto c = x.a_ <=> y.a_; c != 0) return c;
    return x.b_ <=> y.b_;
  }

 private:
  Angle a_, b_;
};

bool unlinked(const Leaf& l1, const Leaf& l2);

// Sweep check over a whole family, O(n log n).
bool pairwise_unlinked(const std::vector<Leaf>& leaves);

struct Lamination {
  std::vector<Leaf> leaves;
  std::vector<unsigned> generation;  // parallel to leaves
  unsigned depth = 0;
};

// Leaves of the basilica lamination up to `depth` pullbacks of {1/3, 2/3}.
// Pullbacks pair the preimages that lie on the same side of the diameter
// {1/4, 3/4}; unlinkedness alone does not fix the choice at the first step.
Lamination basilica_lamination(unsigned depth);

// Throws std::invalid_argument when t is not a basilica angle.
Angle basilica_partner(const Angle& t);

class AnglePartition {
 public:
  AnglePartition() = default;
  // Classes must be disjoint and cover the ground set; missing elements are
  // added as singletons.
  AnglePartition(AngleSet ground, std::vector<std::vector<Angle>> classes);
  static AnglePartition discrete(AngleSet ground);

  const AngleSet& ground() const { return ground_; }
  const std::vector<std::vector<Angle>>& classes() const { return classes_; }
  std::size_t class_of(const Angle& t) const;
  bool same_class(const Angle& s, const Angle& t) const;
  // Copy with the classes meeting `group` fused together.
  AnglePartition merged(const std::vector<Angle>& group) const;
  std::vector<std::vector<Angle>> nontrivial_classes() const;

  friend bool operator==(const AnglePartition&, const AnglePartition&) = default;

 private:
  void normalize();
  AngleSet ground_;
  std::vector<std::vector<Angle>> classes_;
};

// Throws std::invalid_argument on ground mismatch.
bool is_subpartition(const AnglePartition& p, const AnglePartition& q);

// The three period-two cycles {1/8,3/8}, {2/8,6/8}, {5/8,7/8}.
std::vector<Leaf> period_two_cycles();

// Index 1..4 of the open W-interval containing t, or 0.
unsigned w_interval(const Angle& t);

// Period-two pairs lying in the open arc (t - 1/3, t + 1/3).
std::vector<Leaf> alpha_pairs(const Angle& t);

AnglePartition predicted_psi_portrait(const AnglePartition& p, unsigned q, const Angle& t);

}  // namespace cubicslice
