#include "cubicslice/lamination.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace cubicslice {

Leaf::Leaf(Angle a, Angle b) {
  if (a == b) throw std::invalid_argument("Leaf: degenerate chord at " + a.str());
  if (b < a) std::swap(a, b);
  a_ = std::move(a);
  b_ = std::move(b);
}

Leaf Leaf::doubled() const { return Leaf(a_.times(2), b_.times(2)); }

bool unlinked(const Leaf& l1, const Leaf& l2) {
  auto inside = [&](const Angle& t) { return l1.a() < t && t < l1.b(); };
  auto outside = [&](const Angle& t) { return t < l1.a() || l1.b() < t; };
  // Linked means one endpoint strictly inside and the other strictly outside.
  return !((inside(l2.a()) && outside(l2.b())) || (outside(l2.a()) && inside(l2.b())));
}

bool pairwise_unlinked(const std::vector<Leaf>& input) {
  std::vector<Leaf> leaves = input;
  std::sort(leaves.begin(), leaves.end());
  leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());

  struct Event {
    const Angle* at;
    bool open;
    const Angle* other;
    std::size_t id;
  };
  std::vector<Event> ev;
  ev.reserve(2 * leaves.size());
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    ev.push_back({&leaves[i].a(), true, &leaves[i].b(), i});
    ev.push_back({&leaves[i].b(), false, &leaves[i].a(), i});
  }
  // At a shared point: close inner chords first, then open outer chords first.
  std::sort(ev.begin(), ev.end(), [](const Event& x, const Event& y) {
    if (auto c = *x.at <=> *y.at; c != 0) return c < 0;
    if (x.open != y.open) return !x.open;
    return *y.other < *x.other;
  });
  std::vector<std::size_t> stack;
  for (const Event& e : ev) {
    if (e.open) {
      stack.push_back(e.id);
    } else {
      if (stack.empty() || stack.back() != e.id) return false;
      stack.pop_back();
    }
  }
  return true;
}

namespace {

const Angle kQuarter(1, 4);
const Angle kThreeQuarters(3, 4);

bool in_upper_half(const Angle& t) { return in_arc(t, kQuarter, kThreeQuarters); }

// The two pullbacks of a leaf under doubling, grouped by side of {1/4, 3/4}.
std::pair<Leaf, Leaf> pull_back(const Leaf& l) {
  if (l.has_endpoint(Angle(1, 2)) || l.has_endpoint(Angle()))
    throw std::logic_error("pull_back: leaf touches the critical value");
  Angle a0 = l.a().preimage(2, 0), a1 = l.a().preimage(2, 1);
  Angle b0 = l.b().preimage(2, 0), b1 = l.b().preimage(2, 1);
  if (in_upper_half(a0) == in_upper_half(b0)) return {Leaf(a0, b0), Leaf(a1, b1)};
  return {Leaf(a0, b1), Leaf(a1, b0)};
}

}  // namespace

Lamination basilica_lamination(unsigned depth) {
  Lamination lam;
  lam.depth = depth;
  const Leaf root(Angle(1, 3), Angle(2, 3));
  lam.leaves.push_back(root);
  lam.generation.push_back(0);
  std::vector<Leaf> frontier{root};
  for (unsigned g = 1; g <= depth; ++g) {
    std::vector<Leaf> next;
    next.reserve(2 * frontier.size());
    for (const Leaf& l : frontier) {
      auto [x, y] = pull_back(l);
      for (Leaf* c : {&x, &y}) {
        if (*c == root) continue;
        next.push_back(*c);
      }
    }
    for (const Leaf& l : next) {
      lam.leaves.push_back(l);
      lam.generation.push_back(g);
    }
    frontier = std::move(next);
  }
  if (!pairwise_unlinked(lam.leaves))
    throw std::logic_error("basilica_lamination: constructed leaves are linked");
  return lam;
}

Angle basilica_partner(const Angle& t) {
  auto n = basilica_index(t);
  if (!n) throw std::invalid_argument("basilica_partner: " + t.str() + " is not a basilica angle");
  std::vector<Angle> orbit{t};
  for (unsigned i = 0; i < *n; ++i) orbit.push_back(orbit.back().times(2));
  Angle p(2, 3);
  for (unsigned i = *n; i-- > 0;) {
    Angle c0 = p.preimage(2, 0), c1 = p.preimage(2, 1);
    p = (in_upper_half(c0) == in_upper_half(orbit[i])) ? c0 : c1;
  }
  return p;
}

AnglePartition::AnglePartition(AngleSet ground, std::vector<std::vector<Angle>> classes)
    : ground_(std::move(ground)), classes_(std::move(classes)) {
  std::set<Angle> seen;
  for (const auto& c : classes_) {
    if (c.empty()) throw std::invalid_argument("AnglePartition: empty class");
    for (const Angle& t : c) {
      if (!ground_.contains(t))
        throw std::invalid_argument("AnglePartition: " + t.str() + " not in ground set");
      if (!seen.insert(t).second)
        throw std::invalid_argument("AnglePartition: " + t.str() + " appears twice");
    }
  }
  for (const Angle& t : ground_)
    if (!seen.count(t)) classes_.push_back({t});
  normalize();
}

AnglePartition AnglePartition::discrete(AngleSet ground) { return AnglePartition(std::move(ground), {}); }

void AnglePartition::normalize() {
  for (auto& c : classes_) std::sort(c.begin(), c.end());
  std::sort(classes_.begin(), classes_.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
}

std::size_t AnglePartition::class_of(const Angle& t) const {
  for (std::size_t i = 0; i < classes_.size(); ++i)
    if (std::binary_search(classes_[i].begin(), classes_[i].end(), t)) return i;
  throw std::invalid_argument("AnglePartition: " + t.str() + " not in ground set");
}

bool AnglePartition::same_class(const Angle& s, const Angle& t) const {
  return class_of(s) == class_of(t);
}

AnglePartition AnglePartition::merged(const std::vector<Angle>& group) const {
  if (group.empty()) return *this;
  std::set<std::size_t> hit;
  for (const Angle& t : group) hit.insert(class_of(t));
  std::vector<std::vector<Angle>> out;
  std::vector<Angle> fused;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (hit.count(i))
      fused.insert(fused.end(), classes_[i].begin(), classes_[i].end());
    else
      out.push_back(classes_[i]);
  }
  out.push_back(std::move(fused));
  return AnglePartition(ground_, std::move(out));
}

std::vector<std::vector<Angle>> AnglePartition::nontrivial_classes() const {
  std::vector<std::vector<Angle>> out;
  for (const auto& c : classes_)
    if (c.size() > 1) out.push_back(c);
  return out;
}

bool is_subpartition(const AnglePartition& p, const AnglePartition& q) {
  if (!(p.ground() == q.ground()))
    throw std::invalid_argument("is_subpartition: ground sets differ");
  for (const auto& c : p.classes()) {
    std::size_t k = q.class_of(c.front());
    for (const Angle& t : c)
      if (q.class_of(t) != k) return false;
  }
  return true;
}

std::vector<Leaf> period_two_cycles() {
  return {Leaf(Angle(1, 8), Angle(3, 8)), Leaf(Angle(2, 8), Angle(6, 8)),
          Leaf(Angle(5, 8), Angle(7, 8))};
}

unsigned w_interval(const Angle& t) {
  static const int lo[] = {1, 10, 13, 22};
  for (unsigned i = 0; i < 4; ++i)
    if (in_arc(t, Angle(lo[i], 24), Angle(lo[i] + 1, 24))) return i + 1;
  return 0;
}

std::vector<Leaf> alpha_pairs(const Angle& t) {
  const Angle third(1, 3);
  const Angle lo = t - third, hi = t + third;
  std::vector<Leaf> out;
  for (const Leaf& l : period_two_cycles())
    if (in_arc(l.a(), lo, hi) && in_arc(l.b(), lo, hi)) out.push_back(l);
  return out;
}

AnglePartition predicted_psi_portrait(const AnglePartition& p, unsigned q, const Angle& t) {
  if (coperiod_status(t, 2) != CoperiodStatus::no)
    throw std::invalid_argument("predicted_psi_portrait: " + t.str() +
                                " has coperiod 2, the portrait is undefined on its ray");
  if (q != 2) return p;
  std::vector<Angle> group;
  for (const Leaf& l : alpha_pairs(t)) {
    group.push_back(l.a());
    group.push_back(l.b());
  }
  return p.merged(group);
}

}  // namespace cubicslice
