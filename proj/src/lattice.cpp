#include "dadcert/lattice.hpp"

#include <algorithm>
#include <deque>

namespace dadcert {

int64_t Torus::cell_count() const {
  int64_t n = 1;
  for (int i = 0; i < dim; ++i) {
    if (n > (int64_t{1} << 40) / side) throw Error("torus too large");
    n *= side;
  }
  return n;
}

int64_t Torus::encode(const GroupElement& x) const {
  int64_t code = 0, mul = 1;
  for (int i = 0; i < dim; ++i) {
    const int64_t r = ((x[i] % side) + side) % side;
    code += r * mul;
    mul *= side;
  }
  return code;
}

GroupElement Torus::decode(int64_t code) const {
  GroupElement g(dim);
  for (int i = 0; i < dim; ++i) {
    g[i] = code % side;
    code /= side;
  }
  return g;
}

int64_t Torus::shift(int64_t code, const GroupElement& g) const {
  int64_t out = 0, mul = 1;
  for (int i = 0; i < dim; ++i) {
    const int64_t x = code % side;
    code /= side;
    const int64_t r = (((x + g[i]) % side) + side) % side;
    out += r * mul;
    mul *= side;
  }
  return out;
}

GroupElement PeriodicComponents::offset(int64_t cell) const {
  return GroupElement::from_span(
      std::span<const int64_t>(offsets_).subspan(static_cast<size_t>(cell * torus.dim),
                                                 static_cast<size_t>(torus.dim)));
}

void PeriodicComponents::set_offset(int64_t cell, const GroupElement& g) {
  if (offsets_.empty()) offsets_.assign(component_of.size() * static_cast<size_t>(torus.dim), 0);
  for (int i = 0; i < torus.dim; ++i) offsets_[static_cast<size_t>(cell * torus.dim + i)] = g[i];
}

std::vector<GroupElement> PeriodicComponents::offsets_of(size_t comp) const {
  std::vector<GroupElement> out;
  out.reserve(components[comp].cells.size());
  for (int64_t c : components[comp].cells) out.push_back(offset(c));
  return out;
}

std::vector<GroupElement> PeriodicComponents::steps_from_root(int64_t cell) const {
  std::vector<GroupElement> rev;
  while (parent[static_cast<size_t>(cell)] != cell) {
    const int64_t up = parent[static_cast<size_t>(cell)];
    rev.push_back(offset(cell) - offset(up));
    cell = up;
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

namespace {

// d = 1 with steps {-k..k}: components are runs separated by gaps > k.
void interval_components(PeriodicComponents& pc, std::span<const uint8_t> mask, int64_t k) {
  const int64_t n = pc.torus.side;
  std::vector<int64_t> members;
  for (int64_t c = 0; c < n; ++c) {
    if (mask[static_cast<size_t>(c)]) members.push_back(c);
  }
  if (members.empty()) return;
  const size_t t = members.size();
  auto gap_after = [&](size_t i) {
    return i + 1 < t ? members[i + 1] - members[i] : members[0] + n - members[t - 1];
  };
  size_t start = t;
  for (size_t i = 0; i < t; ++i) {
    if (gap_after(i) > k) {
      start = (i + 1) % t;
      break;
    }
  }
  if (start == t) {
    PeriodicComponents::Component comp;
    comp.root = members[0];
    comp.unbounded = true;
    int64_t pos = 0;
    for (size_t i = 0; i < t; ++i) {
      const int64_t c = members[i];
      comp.cells.push_back(c);
      pc.component_of[static_cast<size_t>(c)] = 0;
      pc.set_offset(c, GroupElement{pos});
      pc.parent[static_cast<size_t>(c)] = i == 0 ? c : members[i - 1];
      comp.cycle.push_back(GroupElement{gap_after(i)});
      pos += gap_after(i);
    }
    pc.components.push_back(std::move(comp));
    return;
  }
  // Walk once around the circle beginning right after a large gap.
  size_t i = start;
  for (size_t visited = 0; visited < t;) {
    PeriodicComponents::Component comp;
    comp.root = members[i];
    const auto id = static_cast<int32_t>(pc.components.size());
    int64_t pos = 0;
    int64_t prev = -1;
    while (true) {
      const int64_t c = members[i];
      comp.cells.push_back(c);
      pc.component_of[static_cast<size_t>(c)] = id;
      pc.set_offset(c, GroupElement{pos});
      pc.parent[static_cast<size_t>(c)] = prev < 0 ? c : prev;
      ++visited;
      const int64_t g = gap_after(i);
      prev = c;
      i = (i + 1) % t;
      if (g > k) break;
      pos += g;
    }
    pc.components.push_back(std::move(comp));
  }
}

}  // namespace

PeriodicComponents periodic_components(const Torus& torus, std::span<const uint8_t> mask,
                                       const FiniteSubset& steps) {
  if (steps.dim() != torus.dim) throw Error("step set dimension does not match torus");
  if (!steps.is_fs()) throw Error("step set must contain the identity and be symmetric");
  const int64_t n = torus.cell_count();
  if (static_cast<int64_t>(mask.size()) != n) throw Error("mask size does not match torus");

  PeriodicComponents pc;
  pc.torus = torus;
  pc.component_of.assign(static_cast<size_t>(n), -1);
  pc.parent.assign(static_cast<size_t>(n), -1);
  pc.set_offset(0, GroupElement(torus.dim));

  if (torus.dim == 1) {
    if (auto iv = steps.as_arithmetic_interval(); iv && iv->first == 1) {
      interval_components(pc, mask, iv->second);
      return pc;
    }
  }

  std::vector<GroupElement> moves;
  steps.for_each([&](const GroupElement& g) {
    if (!g.is_identity()) moves.push_back(g);
  });

  std::deque<int64_t> queue;
  for (int64_t start = 0; start < n; ++start) {
    if (!mask[static_cast<size_t>(start)] || pc.component_of[static_cast<size_t>(start)] >= 0) {
      continue;
    }
    const auto id = static_cast<int32_t>(pc.components.size());
    PeriodicComponents::Component comp;
    comp.root = start;
    pc.component_of[static_cast<size_t>(start)] = id;
    pc.parent[static_cast<size_t>(start)] = start;
    pc.set_offset(start, GroupElement(torus.dim));
    queue.push_back(start);
    while (!queue.empty()) {
      const int64_t c = queue.front();
      queue.pop_front();
      comp.cells.push_back(c);
      const GroupElement here = pc.offset(c);
      for (const auto& f : moves) {
        const int64_t nb = torus.shift(c, f);
        if (!mask[static_cast<size_t>(nb)]) continue;
        const GroupElement lifted = here + f;
        if (pc.component_of[static_cast<size_t>(nb)] < 0) {
          pc.component_of[static_cast<size_t>(nb)] = id;
          pc.set_offset(nb, lifted);
          pc.parent[static_cast<size_t>(nb)] = c;
          queue.push_back(nb);
        } else if (!comp.unbounded && pc.offset(nb) != lifted) {
          comp.unbounded = true;
          comp.cycle = pc.steps_from_root(c);
          comp.cycle.push_back(f);
          auto back = pc.steps_from_root(nb);
          for (auto it = back.rbegin(); it != back.rend(); ++it) comp.cycle.push_back(-*it);
        }
      }
    }
    pc.components.push_back(std::move(comp));
  }
  return pc;
}

}  // namespace dadcert
