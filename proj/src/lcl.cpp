#include "lclavg/lcl.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace lclavg {

int set_size(LabelSet s) { return std::popcount(s); }

std::vector<Label> members(LabelSet s) {
  std::vector<Label> out;
  for (Label l = 0; s; ++l, s >>= 1)
    if (s & 1U) out.push_back(l);
  return out;
}

Label lowest(LabelSet s) {
  if (s == 0) throw std::invalid_argument("empty label-set");
  return std::countr_zero(s);
}

// ---- ConstraintSet ----

ConstraintSet::ConstraintSet(std::size_t inputs, std::size_t outputs, const std::vector<Multiset>& allowed)
    : outputs_(outputs), codes_(inputs * outputs) {
  for (const auto& m : allowed) {
    for (const auto& p : m)
      if (p.in < 0 || static_cast<std::size_t>(p.in) >= inputs || p.out < 0 ||
          static_cast<std::size_t>(p.out) >= outputs)
        throw SpecError("constraint pair out of range");
    Multiset s = m;
    std::sort(s.begin(), s.end());
    list_.push_back(std::move(s));
    max_size_ = std::max(max_size_, m.size());
  }
  std::sort(list_.begin(), list_.end());
  list_.erase(std::unique(list_.begin(), list_.end()), list_.end());
  const std::size_t bits = std::bit_width(codes_ + 1);
  use_keys_ = 6 + max_size_ * bits <= 64 && max_size_ < 64;
  for (const auto& m : list_) {
    if (use_keys_) {
      keys_.insert(key(m));
    } else {
      std::vector<int> c;
      for (const auto& p : m) c.push_back(code(p));
      fallback_.insert(std::move(c));
    }
  }
}

std::uint64_t ConstraintSet::key(std::span<const IoPair> m) const {
  int codes[64];
  const std::size_t len = m.size();
  for (std::size_t i = 0; i < len; ++i) codes[i] = code(m[i]);
  std::sort(codes, codes + len);
  const std::size_t bits = std::bit_width(codes_ + 1);
  std::uint64_t k = len;
  for (std::size_t i = 0; i < len; ++i) k = (k << bits) | static_cast<std::uint64_t>(codes[i] + 1);
  return k;
}

bool ConstraintSet::allows(std::span<const IoPair> m) const {
  if (m.size() > max_size_) return false;
  if (use_keys_) return keys_.count(key(m)) != 0;
  std::vector<int> c;
  for (const auto& p : m) c.push_back(code(p));
  std::sort(c.begin(), c.end());
  return fallback_.count(c) != 0;
}

bool ConstraintSet::extendable(std::span<const IoPair> m, std::size_t size) const {
  Multiset part(m.begin(), m.end());
  std::sort(part.begin(), part.end());
  for (const auto& allowed : list_) {
    if (allowed.size() != size) continue;
    if (std::includes(allowed.begin(), allowed.end(), part.begin(), part.end())) return true;
  }
  return false;
}

// ---- LclSpec ----

LclSpec::LclSpec(std::vector<std::string> inputs, std::vector<std::string> outputs, std::vector<Multiset> white,
                 std::vector<Multiset> black)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
  if (inputs_.empty() || outputs_.empty()) throw SpecError("alphabets must be nonempty");
  if (outputs_.size() > 31) throw SpecError("at most 31 output labels supported");
  white_ = ConstraintSet(inputs_.size(), outputs_.size(), white);
  black_ = ConstraintSet(inputs_.size(), outputs_.size(), black);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

int index_of(const std::vector<std::string>& names, const std::string& x, const char* what) {
  auto it = std::find(names.begin(), names.end(), x);
  if (it == names.end()) throw SpecError(std::string("unknown ") + what + " label '" + x + "'");
  return static_cast<int>(it - names.begin());
}

Multiset parse_multiset(const std::string& body, const std::vector<std::string>& in,
                        const std::vector<std::string>& out) {
  Multiset m;
  std::size_t pos = 0;
  for (;;) {
    const auto open = body.find('(', pos);
    if (open == std::string::npos) {
      if (!trim(body.substr(pos)).empty()) throw SpecError("junk in multiset: " + body);
      break;
    }
    if (!trim(body.substr(pos, open - pos)).empty()) throw SpecError("junk in multiset: " + body);
    const auto close = body.find(')', open);
    if (close == std::string::npos) throw SpecError("unclosed pair: " + body);
    const std::string inner = body.substr(open + 1, close - open - 1);
    const auto comma = inner.find(',');
    if (comma == std::string::npos) throw SpecError("pair without comma: " + inner);
    m.push_back({index_of(in, trim(inner.substr(0, comma)), "input"),
                 index_of(out, trim(inner.substr(comma + 1)), "output")});
    pos = close + 1;
  }
  return m;
}

}  // namespace

LclSpec parse_lcl_spec(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> inputs, outputs;
  std::vector<Multiset> white, black;
  bool have_in = false, have_out = false;
  for (std::string line; std::getline(in, line);) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw SpecError("missing ':' in line: " + line);
    const std::string head = trim(line.substr(0, colon)), body = line.substr(colon + 1);
    if (head == "inputs") {
      inputs = split_ws(body);
      have_in = true;
    } else if (head == "outputs") {
      outputs = split_ws(body);
      have_out = true;
    } else if (head == "W" || head == "B") {
      if (!have_in || !have_out) throw SpecError("constraints before alphabets");
      (head == "W" ? white : black).push_back(parse_multiset(body, inputs, outputs));
    } else {
      throw SpecError("unknown line kind: " + head);
    }
  }
  if (!have_in || !have_out) throw SpecError("missing alphabet line");
  return LclSpec(inputs, outputs, white, black);
}

std::string write_lcl_spec(const LclSpec& spec) {
  std::string s = "inputs:";
  for (const auto& x : spec.input_names()) s += " " + x;
  s += "\noutputs:";
  for (const auto& x : spec.output_names()) s += " " + x;
  s += "\n";
  auto emit = [&](const char* tag, const ConstraintSet& cs) {
    for (const auto& m : cs.multisets()) {
      s += tag;
      s += ":";
      for (const auto& p : m) s += " (" + spec.input_names()[p.in] + "," + spec.output_names()[p.out] + ")";
      s += "\n";
    }
  };
  emit("W", spec.white());
  emit("B", spec.black());
  return s;
}

namespace {

std::vector<Multiset> same_color_multisets(std::size_t max_degree) {
  std::vector<Multiset> w;
  w.push_back({});
  for (std::size_t d = 1; d <= max_degree; ++d)
    for (Label c = 0; c < 3; ++c) w.push_back(Multiset(d, IoPair{0, c}));
  return w;
}

std::vector<Multiset> unequal_pairs() {
  std::vector<Multiset> b;
  for (Label a = 0; a < 3; ++a)
    for (Label c = a + 1; c < 3; ++c) b.push_back({{0, a}, {0, c}});
  return b;
}

}  // namespace

LclSpec three_coloring_spec(std::size_t max_degree) {
  return LclSpec({"-"}, {"1", "2", "3"}, same_color_multisets(max_degree), unequal_pairs());
}

NodeEdgeSpec three_coloring_node_edge_spec(std::size_t max_degree) {
  return NodeEdgeSpec{{"-"}, {"1", "2", "3"}, same_color_multisets(max_degree), unequal_pairs()};
}

LclSpec convert_node_edge_to_black_white(const NodeEdgeSpec& spec) {
  for (const auto& m : spec.edge_constraints)
    if (m.size() != 2) throw SpecError("edge constraint multiset must have size 2");
  return LclSpec(spec.inputs, spec.outputs, spec.node_constraints, spec.edge_constraints);
}

Verdict check_solution(const LclSpec& spec, const BipartiteTree& bt, std::span<const Label> labels,
                       std::span<const int> inputs) {
  const Tree& t = bt.tree;
  if (labels.size() != t.edge_count()) throw std::invalid_argument("label count mismatch");
  for (Label l : labels)
    if (l < 0 || static_cast<std::size_t>(l) >= spec.output_count())
      throw std::invalid_argument("missing or out-of-range label");
  Multiset m;
  for (NodeId v = 0; v < t.node_count(); ++v) {
    m.clear();
    for (std::size_t e : t.incident_edges(v)) m.push_back({inputs.empty() ? 0 : inputs[e], labels[e]});
    const bool black = bt.is_black(v);
    if (!(black ? spec.black() : spec.white()).allows(m))
      return {false, v, std::string(black ? "black" : "white") + " constraint violated at node " + std::to_string(v)};
  }
  return {};
}

Verdict check_node_edge_solution(const NodeEdgeSpec& spec, const Tree& t,
                                 std::span<const std::array<Label, 2>> labels) {
  const ConstraintSet node(spec.inputs.size(), spec.outputs.size(), spec.node_constraints);
  const ConstraintSet edge(spec.inputs.size(), spec.outputs.size(), spec.edge_constraints);
  if (labels.size() != t.edge_count()) throw std::invalid_argument("label count mismatch");
  Multiset m;
  for (NodeId v = 0; v < t.node_count(); ++v) {
    m.clear();
    for (std::size_t e : t.incident_edges(v)) m.push_back({0, labels[e][t.edges()[e].first == v ? 0 : 1]});
    if (!node.allows(m)) return {false, v, "node constraint violated at " + std::to_string(v)};
  }
  for (std::size_t e = 0; e < t.edge_count(); ++e) {
    const Multiset pair{{0, labels[e][0]}, {0, labels[e][1]}};
    if (!edge.allows(pair))
      return {false, t.edges()[e].first, "edge constraint violated on edge " + std::to_string(e)};
  }
  return {};
}

// ---- single node machinery ----

namespace {

// Enumerates one label per slot (slot i from sets[i] with input inputs[i]); calls visit on every
// assignment whose multiset the constraint allows. Stops as soon as visit returns true.
template <class F>
bool enumerate_assignments(const ConstraintSet& cs, std::span<const int> inputs, std::span<const LabelSet> sets,
                           F&& visit) {
  const std::size_t k = sets.size();
  for (LabelSet s : sets)
    if (s == 0) return false;
  std::vector<std::vector<Label>> choices(k);
  for (std::size_t i = 0; i < k; ++i) choices[i] = members(sets[i]);
  std::vector<std::size_t> idx(k, 0);
  std::vector<Label> labels(k);
  Multiset m(k);
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) {
      labels[i] = choices[i][idx[i]];
      m[i] = {inputs[i], labels[i]};
    }
    if (cs.allows(m) && visit(labels)) return true;
    std::size_t i = 0;
    while (i < k && ++idx[i] == choices[i].size()) idx[i++] = 0;
    if (i == k) return false;
  }
}

}  // namespace

std::vector<Incoming> as_incoming(std::span<const LabelSet> sets) {
  std::vector<Incoming> v;
  v.reserve(sets.size());
  for (LabelSet s : sets) v.push_back({s, 0, 0});
  return v;
}

LabelSet near_side_set(const LclSpec& spec, const Incoming& in) {
  LabelSet out = 0;
  for (Label y = 0; y < static_cast<Label>(spec.output_count()); ++y)
    for (Label x : members(in.set)) {
      const IoPair m[2] = {{in.input_far, x}, {in.input_near, y}};
      if (spec.black().allows(m)) {
        out |= singleton(y);
        break;
      }
    }
  return out;
}

LabelSet maximal_label_set_single_node(const LclSpec& spec, std::span<const Incoming> incoming, int out_input) {
  std::vector<int> inputs;
  std::vector<LabelSet> sets;
  for (const auto& in : incoming) {
    inputs.push_back(in.input_near);
    sets.push_back(near_side_set(spec, in));
  }
  inputs.push_back(out_input);
  sets.push_back(0);
  LabelSet g = 0;
  for (Label l = 0; l < static_cast<Label>(spec.output_count()); ++l) {
    sets.back() = singleton(l);
    if (enumerate_assignments(spec.white(), inputs, sets, [](const std::vector<Label>&) { return true; }))
      g |= singleton(l);
  }
  return g;
}

LabelSet maximal_label_set_single_node(const LclSpec& spec, std::span<const LabelSet> incoming) {
  const auto in = as_incoming(incoming);
  return maximal_label_set_single_node(spec, in, 0);
}

bool root_completable(const LclSpec& spec, std::span<const Incoming> incoming) {
  std::vector<int> inputs;
  std::vector<LabelSet> sets;
  for (const auto& in : incoming) {
    inputs.push_back(in.input_near);
    sets.push_back(near_side_set(spec, in));
  }
  return enumerate_assignments(spec.white(), inputs, sets, [](const std::vector<Label>&) { return true; });
}

ChosenLabels choose_labels_single_node(const LclSpec& spec, std::span<const Incoming> incoming,
                                       std::optional<Label> outgoing, int out_input) {
  std::vector<int> inputs;
  std::vector<LabelSet> sets;
  for (const auto& in : incoming) {
    inputs.push_back(in.input_near);
    sets.push_back(near_side_set(spec, in));
  }
  if (outgoing) {
    inputs.push_back(out_input);
    sets.push_back(singleton(*outgoing));
  }
  ChosenLabels res;
  const bool found = enumerate_assignments(spec.white(), inputs, sets, [&](const std::vector<Label>& labels) {
    res.near.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(incoming.size()));
    return true;
  });
  if (!found) throw std::logic_error("no completion for the requested outgoing label");
  for (std::size_t i = 0; i < incoming.size(); ++i) {
    Label pick = -1;
    for (Label x : members(incoming[i].set)) {
      const IoPair m[2] = {{incoming[i].input_far, x}, {incoming[i].input_near, res.near[i]}};
      if (spec.black().allows(m)) {
        pick = x;
        break;
      }
    }
    if (pick < 0) throw std::logic_error("near label without far witness");
    res.far.push_back(pick);
  }
  return res;
}

ChosenLabels choose_labels_single_node(const LclSpec& spec, std::span<const LabelSet> incoming,
                                       std::optional<Label> outgoing) {
  const auto in = as_incoming(incoming);
  return choose_labels_single_node(spec, in, outgoing, 0);
}

LabelSet LabelSetCache::g(std::span<const LabelSet> incoming) {
  const std::size_t bits = spec_.output_count();
  if (4 + incoming.size() * bits > 64 || incoming.size() > 15) return maximal_label_set_single_node(spec_, incoming);
  LabelSet sorted[16];
  std::copy(incoming.begin(), incoming.end(), sorted);
  std::sort(sorted, sorted + incoming.size());
  std::uint64_t key = incoming.size();
  for (std::size_t i = 0; i < incoming.size(); ++i) key = (key << bits) | sorted[i];
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  const LabelSet g = maximal_label_set_single_node(spec_, incoming);
  memo_.emplace(key, g);
  return g;
}

// ---- paths ----

std::size_t PathInstance::incoming_count() const {
  std::size_t c = 0;
  for (const auto& v : incoming) c += v.size();
  return c;
}

bool is_feasible_labeling(const LclSpec& spec, const PathInstance& path, const PathLabeling& lab) {
  const std::size_t k = path.length();
  if (k == 0) return false;
  const std::size_t ic = path.incoming_count();
  if (lab.incoming.size() != ic || lab.hidden.size() != ic + 2 * (k - 1)) return false;
  const int ei = path.edge_input;
  const Label out_range = static_cast<Label>(spec.output_count());
  auto in_range = [&](Label l) { return l >= 0 && l < out_range; };
  if (!in_range(lab.out_first) || !in_range(lab.out_last)) return false;
  for (Label l : lab.incoming)
    if (!in_range(l)) return false;
  for (Label l : lab.hidden)
    if (!in_range(l)) return false;

  std::size_t flat = 0;
  Multiset m;
  for (std::size_t j = 0; j < k; ++j) {
    m.clear();
    for (const auto& in : path.incoming[j]) {
      const Label far = lab.incoming[flat], near = lab.hidden[flat];
      if (!contains(in.set, far)) return false;
      const IoPair b[2] = {{in.input_far, far}, {in.input_near, near}};
      if (!spec.black().allows(b)) return false;
      m.push_back({in.input_near, near});
      ++flat;
    }
    if (j > 0) m.push_back({ei, lab.hidden[ic + 2 * (j - 1) + 1]});
    if (j + 1 < k) m.push_back({ei, lab.hidden[ic + 2 * j]});
    if (j == 0) m.push_back({ei, lab.out_first});
    if (j + 1 == k) m.push_back({ei, lab.out_last});
    if (!spec.white().allows(m)) return false;
  }
  for (std::size_t j = 0; j + 1 < k; ++j) {
    const IoPair b[2] = {{ei, lab.hidden[ic + 2 * j]}, {ei, lab.hidden[ic + 2 * j + 1]}};
    if (!spec.black().allows(b)) return false;
  }
  return true;
}

PathClass path_maximal_class(const LclSpec& spec, const PathInstance& path, std::size_t limit) {
  const std::size_t k = path.length();
  PathClass out;
  if (k == 0) return out;
  const std::size_t ic = path.incoming_count();
  const int ei = path.edge_input;
  const Label L = static_cast<Label>(spec.output_count());
  std::vector<std::size_t> first_flat(k + 1, 0);
  for (std::size_t j = 0; j < k; ++j) first_flat[j + 1] = first_flat[j] + path.incoming[j].size();

  PathLabeling cur;
  cur.incoming.assign(ic, 0);
  cur.hidden.assign(ic + 2 * (k - 1), 0);

  // Per node: choose near labels, the node's own half of the next internal edge and any outgoing
  // labels, check the white constraint, then enumerate far labels and the other half.
  std::function<void(std::size_t)> node = [&](std::size_t j) {
    if (j == k) {
      out.push_back(cur);
      if (out.size() > limit) throw SpecError("maximal class exceeds enumeration limit");
      return;
    }
    const auto& ins = path.incoming[j];
    const std::size_t base = first_flat[j];
    // Variable slots at node j: near labels, own half of edge j, outgoing labels.
    std::vector<Label*> slots;
    for (std::size_t i = 0; i < ins.size(); ++i) slots.push_back(&cur.hidden[base + i]);
    if (j + 1 < k) slots.push_back(&cur.hidden[ic + 2 * j]);
    if (j == 0) slots.push_back(&cur.out_first);
    if (j + 1 == k) slots.push_back(&cur.out_last);
    const std::size_t ns = slots.size();
    std::vector<Label> idx(ns, 0);
    Multiset m;
    for (;;) {
      for (std::size_t s = 0; s < ns; ++s) *slots[s] = idx[s];
      m.clear();
      for (std::size_t i = 0; i < ins.size(); ++i) m.push_back({ins[i].input_near, cur.hidden[base + i]});
      if (j > 0) m.push_back({ei, cur.hidden[ic + 2 * (j - 1) + 1]});
      if (j + 1 < k) m.push_back({ei, cur.hidden[ic + 2 * j]});
      if (j == 0) m.push_back({ei, cur.out_first});
      if (j + 1 == k) m.push_back({ei, cur.out_last});
      if (spec.white().allows(m)) {
        // Far labels per incoming edge.
        std::vector<std::vector<Label>> far(ins.size());
        bool ok = true;
        for (std::size_t i = 0; i < ins.size() && ok; ++i) {
          for (Label x : members(ins[i].set)) {
            const IoPair b[2] = {{ins[i].input_far, x}, {ins[i].input_near, cur.hidden[base + i]}};
            if (spec.black().allows(b)) far[i].push_back(x);
          }
          ok = !far[i].empty();
        }
        std::vector<Label> other;
        if (ok && j + 1 < k) {
          for (Label y = 0; y < L; ++y) {
            const IoPair b[2] = {{ei, cur.hidden[ic + 2 * j]}, {ei, y}};
            if (spec.black().allows(b)) other.push_back(y);
          }
          ok = !other.empty();
        }
        if (ok) {
          std::vector<std::size_t> fi(ins.size(), 0);
          for (;;) {
            for (std::size_t i = 0; i < ins.size(); ++i) cur.incoming[base + i] = far[i][fi[i]];
            if (j + 1 < k) {
              for (Label y : other) {
                cur.hidden[ic + 2 * j + 1] = y;
                node(j + 1);
              }
            } else {
              node(j + 1);
            }
            std::size_t i = 0;
            while (i < ins.size() && ++fi[i] == far[i].size()) fi[i++] = 0;
            if (i == ins.size()) break;
          }
        }
      }
      std::size_t s = 0;
      while (s < ns && ++idx[s] == L) idx[s++] = 0;
      if (s == ns) break;
    }
  };
  node(0);
  std::sort(out.begin(), out.end());
  return out;
}

bool verify_independent_class(const LclSpec& spec, const PathInstance& path, const PathClass& candidate) {
  std::set<std::pair<Label, Label>> present;
  LabelSet a = 0, b = 0;
  for (const auto& lab : candidate) {
    if (!is_feasible_labeling(spec, path, lab))
      throw std::invalid_argument("candidate member is not a feasible labeling");
    present.emplace(lab.out_first, lab.out_last);
    a |= singleton(lab.out_first);
    b |= singleton(lab.out_last);
  }
  for (Label x : members(a))
    for (Label y : members(b))
      if (!present.count({x, y})) return false;
  return true;
}

// ---- 3-coloring feasible function ----

LabelSet ThreeColoringFeasible::available_colors(std::span<const Incoming> incoming) {
  LabelSet avail = 0;
  for (Label c = 0; c < 3; ++c) {
    bool ok = true;
    for (const auto& in : incoming)
      if ((in.set & ~singleton(c) & 0x7U) == 0) ok = false;
    if (ok) avail |= singleton(c);
  }
  return avail;
}

namespace {

std::vector<LabelSet> checked_available(const PathInstance& path) {
  if (path.length() == 0) throw std::invalid_argument("empty path");
  std::vector<LabelSet> avail;
  for (const auto& ins : path.incoming) {
    const LabelSet a = ThreeColoringFeasible::available_colors(ins);
    if (set_size(a) < 2) throw std::logic_error("path node has fewer than two available colors");
    avail.push_back(a);
  }
  return avail;
}

// Colors reachable at the last node from first color a.
LabelSet reachable_last(const std::vector<LabelSet>& avail, Label a) {
  if (!contains(avail[0], a)) return 0;
  LabelSet reach = singleton(a);
  for (std::size_t j = 1; j < avail.size(); ++j) {
    LabelSet next = 0;
    for (Label c : members(avail[j]))
      if (reach & ~singleton(c)) next |= singleton(c);
    reach = next;
  }
  return reach;
}

}  // namespace

EndpointSets ThreeColoringFeasible::endpoint_sets(const PathInstance& path) const {
  const auto avail = checked_available(path);
  LabelSet reach[3];
  for (Label a = 0; a < 3; ++a) reach[a] = reachable_last(avail, a);
  EndpointSets best;
  std::pair<int, int> best_score{-1, -1};
  for (LabelSet e1 = 1; e1 < 8; ++e1) {
    if ((e1 & avail.front()) != e1) continue;
    for (LabelSet e2 = 1; e2 < 8; ++e2) {
      if ((e2 & avail.back()) != e2) continue;
      bool ok = true;
      for (Label a : members(e1))
        if ((reach[a] & e2) != e2) ok = false;
      if (!ok) continue;
      const std::pair<int, int> score{std::min(set_size(e1), set_size(e2)), set_size(e1) * set_size(e2)};
      if (score > best_score) {
        best_score = score;
        best = {e1, e2};
      }
    }
  }
  if (best.first == 0) throw std::logic_error("no completable endpoint pair");
  return best;
}

PathLabeling ThreeColoringFeasible::complete(const PathInstance& path, Label out_first, Label out_last) const {
  const auto avail = checked_available(path);
  const std::size_t k = path.length();
  // Forward reachability, then walk back choosing predecessors.
  std::vector<LabelSet> reach(k);
  reach[0] = contains(avail[0], out_first) ? singleton(out_first) : 0;
  for (std::size_t j = 1; j < k; ++j) {
    LabelSet next = 0;
    for (Label c : members(avail[j]))
      if (reach[j - 1] & ~singleton(c)) next |= singleton(c);
    reach[j] = next;
  }
  if (!contains(reach[k - 1], out_last)) throw std::logic_error("outgoing pair not completable");
  std::vector<Label> color(k);
  color[k - 1] = out_last;
  for (std::size_t j = k - 1; j > 0; --j) color[j - 1] = lowest(reach[j - 1] & ~singleton(color[j]));

  PathLabeling lab;
  lab.out_first = out_first;
  lab.out_last = out_last;
  for (std::size_t j = 0; j < k; ++j)
    for (const auto& in : path.incoming[j]) {
      lab.incoming.push_back(lowest(in.set & ~singleton(color[j])));
      lab.hidden.push_back(color[j]);
    }
  for (std::size_t j = 0; j + 1 < k; ++j) {
    lab.hidden.push_back(color[j]);
    lab.hidden.push_back(color[j + 1]);
  }
  return lab;
}

PathClass ThreeColoringFeasible::independent_class(const PathInstance& path) const {
  const EndpointSets e = endpoint_sets(path);
  PathClass all = path_maximal_class(spec_, path);
  PathClass out;
  for (auto& lab : all)
    if (contains(e.first, lab.out_first) && contains(e.last, lab.out_last)) out.push_back(std::move(lab));
  return out;
}

PathClass feasible_function_3coloring(const PathInstance& path, std::size_t max_degree) {
  return ThreeColoringFeasible(three_coloring_spec(max_degree)).independent_class(path);
}

// ---- oracles ----

DiameterResult solve_diameter(const LclSpec& spec, const BipartiteTree& bt, std::span<const int> inputs) {
  const Tree& t = bt.tree;
  const std::size_t n = t.node_count();
  auto input = [&](std::size_t e) { return inputs.empty() ? 0 : inputs[e]; };
  auto cs = [&](NodeId v) -> const ConstraintSet& { return bt.is_black(v) ? spec.black() : spec.white(); };

  std::vector<std::size_t> rem(n);
  for (NodeId v = 0; v < n; ++v) rem[v] = t.degree(v);
  std::vector<std::uint8_t> removed(n, 0);
  std::vector<std::size_t> parent_edge(n, SIZE_MAX);
  std::vector<LabelSet> set(t.edge_count(), 0);
  std::vector<std::vector<std::size_t>> child_edges(n);
  std::vector<NodeId> order;
  DiameterResult res;
  std::optional<NodeId> root;

  std::vector<NodeId> layer;
  while (order.size() < n) {
    ++res.peel_rounds;
    layer.clear();
    for (NodeId v = 0; v < n; ++v)
      if (!removed[v] && rem[v] <= 1) layer.push_back(v);
    // Two adjacent candidates form the last edge; only the smaller one is removed.
    std::vector<std::uint8_t> in_layer(n, 0);
    for (NodeId v : layer) in_layer[v] = 1;
    std::vector<NodeId> take;
    for (NodeId v : layer) {
      bool skip = false;
      for (NodeId u : t.neighbors(v))
        if (!removed[u] && in_layer[u] && u < v) skip = true;
      if (!skip) take.push_back(v);
    }
    for (NodeId v : take) {
      std::vector<int> ins;
      std::vector<LabelSet> sets;
      for (std::size_t e : child_edges[v]) {
        ins.push_back(input(e));
        sets.push_back(set[e]);
      }
      std::size_t pe = SIZE_MAX;
      for (std::size_t p = 0; p < t.degree(v); ++p)
        if (!removed[t.neighbor(v, p)]) pe = t.edge_id(v, p);
      if (pe == SIZE_MAX) {
        if (!enumerate_assignments(cs(v), ins, sets, [](const std::vector<Label>&) { return true; })) {
          res.empty_at = v;
          return res;
        }
        root = v;
      } else {
        ins.push_back(input(pe));
        sets.push_back(0);
        LabelSet s = 0;
        for (Label l = 0; l < static_cast<Label>(spec.output_count()); ++l) {
          sets.back() = singleton(l);
          if (enumerate_assignments(cs(v), ins, sets, [](const std::vector<Label>&) { return true; }))
            s |= singleton(l);
        }
        if (s == 0) {
          res.empty_at = v;
          return res;
        }
        set[pe] = s;
        parent_edge[v] = pe;
        child_edges[t.other_end(pe, v)].push_back(pe);
      }
    }
    for (NodeId v : take) {
      removed[v] = 1;
      order.push_back(v);
      if (parent_edge[v] != SIZE_MAX) --rem[t.other_end(parent_edge[v], v)];
    }
  }

  res.labels.assign(t.edge_count(), -1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId v = *it;
    std::vector<int> ins;
    std::vector<LabelSet> sets;
    for (std::size_t e : child_edges[v]) {
      ins.push_back(input(e));
      sets.push_back(set[e]);
    }
    if (parent_edge[v] != SIZE_MAX) {
      ins.push_back(input(parent_edge[v]));
      sets.push_back(singleton(res.labels[parent_edge[v]]));
    }
    std::vector<Label> chosen;
    if (!enumerate_assignments(cs(v), ins, sets, [&](const std::vector<Label>& l) {
          chosen = l;
          return true;
        }))
      throw std::logic_error("top-down choice failed");
    for (std::size_t i = 0; i < child_edges[v].size(); ++i) res.labels[child_edges[v][i]] = chosen[i];
  }
  res.solvable = true;
  return res;
}

std::optional<std::vector<Label>> exhaustive_search(const LclSpec& spec, const BipartiteTree& bt,
                                                    std::span<const int> inputs) {
  const Tree& t = bt.tree;
  const std::size_t m = t.edge_count();
  auto input = [&](std::size_t e) { return inputs.empty() ? 0 : inputs[e]; };
  auto cs = [&](NodeId v) -> const ConstraintSet& { return bt.is_black(v) ? spec.black() : spec.white(); };
  if (m == 0) {
    if (cs(0).allows(Multiset{})) return std::vector<Label>{};
    return std::nullopt;
  }
  // Edges in BFS order so nodes fill up early.
  std::vector<std::size_t> order;
  {
    std::vector<std::uint8_t> seen(t.node_count(), 0), used(m, 0);
    std::vector<NodeId> q{0};
    seen[0] = 1;
    for (std::size_t h = 0; h < q.size(); ++h)
      for (std::size_t p = 0; p < t.degree(q[h]); ++p) {
        const NodeId u = t.neighbor(q[h], p);
        const std::size_t e = t.edge_id(q[h], p);
        if (!used[e]) {
          used[e] = 1;
          order.push_back(e);
        }
        if (!seen[u]) {
          seen[u] = 1;
          q.push_back(u);
        }
      }
  }
  std::vector<Label> labels(m, -1);
  auto node_ok = [&](NodeId v) {
    Multiset part;
    for (std::size_t e : t.incident_edges(v))
      if (labels[e] >= 0) part.push_back({input(e), labels[e]});
    if (part.size() == t.degree(v)) return cs(v).allows(part);
    return cs(v).extendable(part, t.degree(v));
  };
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == m) return true;
    const std::size_t e = order[i];
    const auto [u, v] = t.edges()[e];
    for (Label l = 0; l < static_cast<Label>(spec.output_count()); ++l) {
      labels[e] = l;
      if (node_ok(u) && node_ok(v) && go(i + 1)) return true;
    }
    labels[e] = -1;
    return false;
  };
  for (NodeId v = 0; v < t.node_count(); ++v)
    if (t.degree(v) == 0 && !cs(v).allows(Multiset{})) return std::nullopt;
  if (!go(0)) return std::nullopt;
  return labels;
}

}  // namespace lclavg
