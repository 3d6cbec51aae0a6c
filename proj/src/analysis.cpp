#include "opdyn/analysis.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "opdyn/error.hpp"

namespace opdyn {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

std::vector<char> membership(int n, const AgentSet& subset) {
  std::vector<char> in(at(n), 0);
  for (int a : subset) {
    if (a < 0 || a >= n) throw InputError("subset references an unknown agent");
    in[at(a)] = 1;
  }
  return in;
}

// Iterative Tarjan so deep chains do not exhaust the call stack.
std::vector<AgentSet> tarjan(const SignedMultigraph& g) {
  const int n = g.size();
  std::vector<int> index(at(n), -1);
  std::vector<int> low(at(n), 0);
  std::vector<char> on_stack(at(n), 0);
  std::vector<int> stack;
  std::vector<AgentSet> out;
  int counter = 0;

  struct Frame {
    int v;
    int next;
  };
  for (int root = 0; root < n; ++root) {
    if (index[at(root)] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    index[at(root)] = low[at(root)] = counter++;
    stack.push_back(root);
    on_stack[at(root)] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const int v = f.v;
      bool descended = false;
      while (f.next < n) {
        const int w = f.next++;
        if (!g.has_edge(v, w)) continue;
        if (index[at(w)] == -1) {
          index[at(w)] = low[at(w)] = counter++;
          stack.push_back(w);
          on_stack[at(w)] = 1;
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[at(w)]) low[at(v)] = std::min(low[at(v)], index[at(w)]);
      }
      if (descended) continue;
      if (low[at(v)] == index[at(v)]) {
        AgentSet comp;
        int w = -1;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[at(w)] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty()) {
        const int parent = call.back().v;
        low[at(parent)] = std::min(low[at(parent)], low[at(v)]);
      }
    }
  }
  return out;
}

// Reachability inside `in`, following edges forwards or backwards.
std::vector<char> reach(const SignedMultigraph& g, const std::vector<char>& in, int start, bool forward) {
  const int n = g.size();
  std::vector<char> seen(at(n), 0);
  std::deque<int> queue{start};
  seen[at(start)] = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v = 0; v < n; ++v) {
      if (!in[at(v)] || seen[at(v)]) continue;
      if (forward ? g.has_edge(u, v) : g.has_edge(v, u)) {
        seen[at(v)] = 1;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<AgentSet> strongly_connected_components(const SignedMultigraph& g) { return tarjan(g); }

StructurePartition structure_partition(const SignedMultigraph& g) {
  const int n = g.size();
  StructurePartition part;
  std::vector<char> grouped(at(n), 0);
  for (const AgentSet& comp : tarjan(g)) {
    const auto in = membership(n, comp);
    bool closed = true;
    for (int i : comp) {
      for (int j = 0; j < n && closed; ++j) {
        if (g.has_edge(i, j) && !in[at(j)]) closed = false;
      }
    }
    if (!closed) continue;
    for (int i : comp) grouped[at(i)] = 1;
    part.groups.push_back(comp);
  }
  std::sort(part.groups.begin(), part.groups.end());
  for (int i = 0; i < n; ++i) {
    if (!grouped[at(i)]) part.rest.push_back(i);
  }
  return part;
}

std::string_view to_string(BipartitionKind kind) {
  return kind == BipartitionKind::Opposition ? "opposition" : "reverse_opposition";
}

AgentSet BipartitionCertificate::side1() const {
  AgentSet out;
  for (std::size_t i = 0; i < side.size(); ++i) {
    if (side[i] == 1) out.push_back(static_cast<int>(i));
  }
  return out;
}

AgentSet BipartitionCertificate::side2() const {
  AgentSet out;
  for (std::size_t i = 0; i < side.size(); ++i) {
    if (side[i] == 2) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> BipartitionCertificate::signs() const {
  std::vector<int> out(side.size(), 0);
  for (std::size_t i = 0; i < side.size(); ++i) {
    if (side[i] == 1) out[i] = 1;
    if (side[i] == 2) out[i] = -1;
  }
  return out;
}

std::optional<BipartitionCertificate> opposition_bipartition(const SignedMultigraph& g, const AgentSet& subset) {
  const int n = g.size();
  const auto in = membership(n, subset);
  BipartitionCertificate cert;
  cert.kind = BipartitionKind::Opposition;
  cert.side.assign(at(n), 0);

  for (int root : subset) {
    if (cert.side[at(root)] != 0) continue;
    cert.side[at(root)] = 1;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v = 0; v < n; ++v) {
        if (!in[at(v)] || cert.side[at(v)] != 0) continue;
        bool flip = false;
        if (g.has_edge(u, v)) {
          flip = g.deviates(u, v);
        } else if (g.has_edge(v, u)) {
          flip = g.deviates(v, u);
        } else {
          continue;
        }
        cert.side[at(v)] = flip ? 3 - cert.side[at(u)] : cert.side[at(u)];
        queue.push_back(v);
      }
    }
  }
  if (!certificate_holds(g, cert)) return std::nullopt;
  return cert;
}

std::optional<BipartitionCertificate> opposition_bipartition(const SignedMultigraph& g) {
  return opposition_bipartition(g, all_agents(g.size()));
}

std::optional<BipartitionCertificate> reverse_opposition_bipartition(const SignedMultigraph& g,
                                                                     const AgentSet& subset) {
  // W ⊙ F is reverse opposition bipartite iff W ⊙ F̄ is opposition bipartite.
  std::optional<std::string> id;
  if (!g.deviations().empty()) id = g.deviations().begin()->first;
  auto cert = opposition_bipartition(g.flipped(id), subset);
  if (cert) cert->kind = BipartitionKind::ReverseOpposition;
  return cert;
}

std::optional<BipartitionCertificate> reverse_opposition_bipartition(const SignedMultigraph& g) {
  return reverse_opposition_bipartition(g, all_agents(g.size()));
}

bool certificate_holds(const SignedMultigraph& g, const BipartitionCertificate& cert) {
  const int n = g.size();
  if (static_cast<int>(cert.side.size()) != n) return false;
  const bool reverse = cert.kind == BipartitionKind::ReverseOpposition;
  for (int i = 0; i < n; ++i) {
    if (cert.side[at(i)] == 0) continue;
    for (int j = 0; j < n; ++j) {
      if (cert.side[at(j)] == 0 || !g.has_edge(i, j)) continue;
      const bool same_side = cert.side[at(i)] == cert.side[at(j)];
      const bool should_deviate = same_side == reverse;
      if (g.deviates(i, j) != should_deviate) return false;
    }
  }
  return true;
}

bool verify_k_partition(const SignedMultigraph& g, const std::vector<AgentSet>& partition) {
  const int n = g.size();
  std::vector<int> group(at(n), -1);
  for (std::size_t k = 0; k < partition.size(); ++k) {
    if (partition[k].empty()) throw InputError("partition contains an empty group");
    for (int a : partition[k]) {
      if (a < 0 || a >= n) throw InputError("partition references an unknown agent");
      if (group[at(a)] != -1) throw InputError("agent " + std::to_string(a + 1) + " appears in two groups");
      group[at(a)] = static_cast<int>(k);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (group[at(i)] == -1) throw InputError("agent " + std::to_string(i + 1) + " is not covered by the partition");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!g.has_edge(i, j)) continue;
      const bool same = group[at(i)] == group[at(j)];
      if (same == g.deviates(i, j)) return false;
    }
  }
  return true;
}

bool is_strongly_connected(const SignedMultigraph& g, const AgentSet& subset) {
  if (subset.empty()) return false;
  const auto in = membership(g.size(), subset);
  const auto fwd = reach(g, in, subset.front(), true);
  const auto bwd = reach(g, in, subset.front(), false);
  return std::all_of(subset.begin(), subset.end(), [&](int a) { return fwd[at(a)] && bwd[at(a)]; });
}

int period(const SignedMultigraph& g, const AgentSet& subset) {
  if (!is_strongly_connected(g, subset)) throw InputError("period needs a strongly connected subset");
  const int n = g.size();
  const auto in = membership(n, subset);
  if (subset.size() == 1) return g.has_edge(subset[0], subset[0]) ? 1 : 0;

  // BFS levels; every edge u -> v closes walks whose lengths differ by
  // level[u] + 1 - level[v], and the gcd of these is the period.
  std::vector<int> level(at(n), -1);
  std::deque<int> queue{subset.front()};
  level[at(subset.front())] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v = 0; v < n; ++v) {
      if (in[at(v)] && level[at(v)] == -1 && g.has_edge(u, v)) {
        level[at(v)] = level[at(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  int d = 0;
  for (int u : subset) {
    for (int v : subset) {
      if (g.has_edge(u, v)) d = std::gcd(d, std::abs(level[at(u)] + 1 - level[at(v)]));
    }
  }
  return d;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Polarizes: return "polarizes";
    case Verdict::Diverges: return "diverges";
    case Verdict::NeutralConsensus: return "neutral_consensus";
  }
  return "unknown";
}

ClassificationResult classify(const SignedMultigraph& g) {
  ClassificationResult result;
  const StructurePartition part = structure_partition(g);
  result.rest = part.rest;

  const OpinionSpectrum& s = g.spectrum();
  bool all_soft = s.is_interval() && s.is_symmetric();
  for (int i = 0; i < g.size() && all_soft; ++i) {
    for (int j = 0; j < g.size(); ++j) {
      if (!g.has_edge(i, j) || g.relation(i, j).follows()) continue;
      const DeviationSpec* spec = g.deviation(i, j);
      double slope = 0.0;
      double intercept = 0.0;
      if (spec == nullptr || !spec->affine_form(slope, intercept) || slope != -1.0 || intercept != 0.0) {
        all_soft = false;
        break;
      }
    }
  }

  bool in_theory = all_soft;
  bool any_diverges = false;
  for (const AgentSet& members : part.groups) {
    GroupClassification gc;
    gc.members = members;
    gc.opposition = opposition_bipartition(g, members);
    gc.reverse = reverse_opposition_bipartition(g, members);
    gc.period = period(g, members);

    const SslsCheck ssls = is_sslss(g.induced(members, false));
    if (!ssls) {
      gc.out_of_theory = true;
      gc.notes = ssls.reasons;
      in_theory = false;
    } else if (gc.reverse) {
      gc.verdict = Verdict::Diverges;
      any_diverges = true;
    } else if (gc.opposition && gc.period == 1) {
      gc.verdict = Verdict::Polarizes;
    } else {
      gc.verdict = Verdict::NeutralConsensus;
    }
    result.groups.push_back(std::move(gc));
  }
  if (in_theory) result.overall_converges = !any_diverges;
  return result;
}

}  // namespace opdyn
