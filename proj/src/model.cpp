// Apache License, Version 2.0, refer to LICENSE.txt

#include "idcsbm/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "idcsbm/special.hpp"

namespace idcsbm {

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::degree_corrected ? "dc" : "plain";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "dc" || text == "degree_corrected" || text == "idcsbm") {
    return ModelKind::degree_corrected;
  }
  if (text == "plain" || text == "isbm") return ModelKind::plain;
  throw std::invalid_argument("unknown model kind '" + std::string(text) + "'");
}

void Hyperparams::validate() const {
  for (double v : {alpha, gamma, kappa, lambda}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("hyperparameters must be positive and finite");
    }
  }
}

double BlockStats::npairs(std::size_t l, std::size_t m) const {
  const auto nl = static_cast<double>(sizes[l]);
  const auto nm = static_cast<double>(sizes[m]);
  return l == m ? nl * nl / 2.0 : nl * nm;
}

BlockStats block_stats(const Network& net, const Partition& part) {
  if (part.size() != net.size()) {
    throw std::invalid_argument("block_stats: partition covers " + std::to_string(part.size()) +
                                " nodes, network has " + std::to_string(net.size()));
  }
  BlockStats s;
  s.sizes = part.sizes();
  const std::size_t L = part.groups();
  s.nplus.assign(L * L, 0);
  for (const auto& [d, c] : net.counts()) {
    const std::size_t l = part[d.i];
    const std::size_t m = part[d.j];
    s.nplus[l * L + m] += c;
    if (l != m) s.nplus[m * L + l] += c;
  }
  s.khat_node = degrees(net).khat;
  s.khat_group.assign(L, 0);
  for (std::size_t i = 0; i < net.size(); ++i) s.khat_group[part[i]] += s.khat_node[i];
  return s;
}

double log_crp_sizes(const std::vector<std::size_t>& sizes, double alpha) {
  std::size_t n = 0;
  double acc = 0.0;
  for (std::size_t sz : sizes) {
    n += sz;
    acc += std::lgamma(static_cast<double>(sz));
  }
  return static_cast<double>(sizes.size()) * std::log(alpha) + std::lgamma(alpha) -
         std::lgamma(static_cast<double>(n) + alpha) + acc;
}

double log_crp(const Partition& part, double alpha) { return log_crp_sizes(part.sizes(), alpha); }

double block_factor(Count nplus, double npairs, double kappa, double lambda) {
  return log_rising(kappa, nplus) - (static_cast<double>(nplus) + kappa) * std::log(npairs + lambda) +
         kappa * std::log(lambda);
}

double group_degree_factor(std::size_t size, Count khat_sum, double gamma) {
  const auto n = static_cast<double>(size);
  return -log_rising(gamma * n, khat_sum) + static_cast<double>(khat_sum) * std::log(n);
}

double node_degree_factor(const std::vector<Count>& khat, double gamma) {
  double acc = 0.0;
  for (Count k : khat) acc += log_rising(gamma, k);
  return acc;
}

double log_data_constant(const Network& net) {
  double acc = 0.0;
  for (const auto& [d, c] : net.counts()) {
    acc -= std::lgamma(static_cast<double>(c) + 1.0);
    if (d.i == d.j) acc -= static_cast<double>(c) * std::numbers::ln2;
  }
  return acc;
}

double block_term(const BlockStats& stats, double kappa, double lambda) {
  double acc = 0.0;
  for (std::size_t l = 0; l < stats.groups(); ++l) {
    for (std::size_t m = l; m < stats.groups(); ++m) {
      acc += block_factor(stats.nplus_at(l, m), stats.npairs(l, m), kappa, lambda);
    }
  }
  return acc;
}

double degree_term(const BlockStats& stats, double gamma) {
  double acc = node_degree_factor(stats.khat_node, gamma);
  for (std::size_t l = 0; l < stats.groups(); ++l) {
    acc += group_degree_factor(stats.sizes[l], stats.khat_group[l], gamma);
  }
  return acc;
}

EvidenceTerms evidence_terms(const Network& net, const Partition& part, const Hyperparams& hp,
                             ModelKind kind) {
  hp.validate();
  const BlockStats stats = block_stats(net, part);
  EvidenceTerms t;
  t.constant = log_data_constant(net);
  t.block = block_term(stats, hp.kappa, hp.lambda);
  t.degree = kind == ModelKind::degree_corrected ? degree_term(stats, hp.gamma) : 0.0;
  t.crp = log_crp(part, hp.alpha);
  return t;
}

double log_evidence(const Network& net, const Partition& part, const Hyperparams& hp,
                    ModelKind kind) {
  const double v = evidence_terms(net, part, hp, kind).total();
  if (!std::isfinite(v)) throw std::runtime_error("log_evidence: non-finite value");
  return v;
}

Adjacency make_adjacency(const Network& net) {
  Adjacency adj;
  adj.rows.resize(net.size());
  adj.self.assign(net.size(), 0);
  for (const auto& [d, c] : net.counts()) {
    if (d.i == d.j) {
      adj.self[d.i] = c;
    } else {
      adj.rows[d.i].push_back({d.j, c});
      adj.rows[d.j].push_back({d.i, c});
    }
  }
  return adj;
}

// ---------------------------------------------------------------------------
// BlockState

BlockState::BlockState(const Partition& part, const Adjacency& adj) {
  if (part.size() != adj.size()) {
    throw std::invalid_argument("BlockState: partition and adjacency sizes differ");
  }
  z_ = part.labels();
  sizes_ = part.sizes();
  cap_ = std::max<std::size_t>(4, sizes_.size());
  nplus_.assign(cap_ * cap_, 0);
  khat_node_.assign(nodes(), 0);
  khat_group_.assign(groups(), 0);
  for (std::size_t i = 0; i < nodes(); ++i) {
    khat_node_[i] = 2 * adj.self[i];
    at(z_[i], z_[i]) += adj.self[i];
    for (const auto& nb : adj.rows[i]) {
      khat_node_[i] += nb.count;
      if (nb.node < i) continue;
      const std::size_t l = z_[i];
      const std::size_t m = z_[nb.node];
      at(l, m) += nb.count;
      if (l != m) at(m, l) += nb.count;
    }
    khat_group_[z_[i]] += khat_node_[i];
  }
}

void BlockState::links_to_groups(std::size_t node, const Adjacency& adj,
                                 std::vector<Count>& out) const {
  out.assign(groups(), 0);
  for (const auto& nb : adj.rows[node]) {
    const std::size_t g = z_[nb.node];
    if (g != kUnassigned) out[g] += nb.count;
  }
}

void BlockState::remove(std::size_t node, const Adjacency& adj) {
  const std::size_t g = z_[node];
  if (g == kUnassigned) throw std::logic_error("BlockState::remove: node not assigned");
  links_to_groups(node, adj, scratch_);
  for (std::size_t m = 0; m < groups(); ++m) {
    if (m == g) continue;
    at(g, m) -= scratch_[m];
    at(m, g) -= scratch_[m];
  }
  at(g, g) -= scratch_[g] + adj.self[node];
  --sizes_[g];
  khat_group_[g] -= khat_node_[node];
  z_[node] = kUnassigned;
  if (sizes_[g] == 0) drop_empty(g);
}

void BlockState::insert(std::size_t node, std::size_t group, const Adjacency& adj) {
  if (z_[node] != kUnassigned) throw std::logic_error("BlockState::insert: node already assigned");
  if (group > groups()) throw std::out_of_range("BlockState::insert: group index");
  if (group == groups()) {
    if (groups() == cap_) grow();
    sizes_.push_back(0);
    khat_group_.push_back(0);
  }
  links_to_groups(node, adj, scratch_);
  for (std::size_t m = 0; m < groups(); ++m) {
    if (m == group) continue;
    at(group, m) += scratch_[m];
    at(m, group) += scratch_[m];
  }
  at(group, group) += scratch_[group] + adj.self[node];
  ++sizes_[group];
  khat_group_[group] += khat_node_[node];
  z_[node] = group;
}

void BlockState::grow() {
  const std::size_t cap = 2 * cap_;
  std::vector<Count> next(cap * cap, 0);
  for (std::size_t l = 0; l < cap_; ++l) {
    for (std::size_t m = 0; m < cap_; ++m) next[l * cap + m] = nplus_[l * cap_ + m];
  }
  nplus_ = std::move(next);
  cap_ = cap;
}

void BlockState::drop_empty(std::size_t group) {
  const std::size_t last = groups() - 1;
  if (group != last) {
    for (std::size_t m = 0; m < groups(); ++m) {
      if (m == group || m == last) continue;
      at(group, m) = at(last, m);
      at(m, group) = at(last, m);
    }
    at(group, group) = at(last, last);
    sizes_[group] = sizes_[last];
    khat_group_[group] = khat_group_[last];
    for (auto& g : z_) {
      if (g == last) g = group;
    }
  }
  for (std::size_t m = 0; m < groups(); ++m) {
    at(last, m) = 0;
    at(m, last) = 0;
  }
  sizes_.pop_back();
  khat_group_.pop_back();
}

namespace {

// block_factor with the kappa-only pieces hoisted out of the inner loop.
struct BlockFactor {
  double kappa;
  double lambda;
  double lgamma_kappa;
  double kappa_log_lambda;

  BlockFactor(double k, double l)
      : kappa(k), lambda(l), lgamma_kappa(std::lgamma(k)), kappa_log_lambda(k * std::log(l)) {}

  double operator()(Count nplus, double npairs) const {
    const double a = static_cast<double>(nplus) + kappa;
    const double rising =
        nplus == 0 ? 0.0 : (kappa < 1e5 ? std::lgamma(a) - lgamma_kappa : log_rising(kappa, nplus));
    return rising - a * std::log(npairs + lambda) + kappa_log_lambda;
  }
};

}  // namespace

void BlockState::log_conditional(std::size_t node, const Adjacency& adj, const Hyperparams& hp,
                                 ModelKind kind, std::vector<double>& out) const {
  if (z_[node] != kUnassigned) {
    throw std::logic_error("BlockState::log_conditional: node must be removed first");
  }
  const std::size_t L = groups();
  links_to_groups(node, adj, scratch_);
  const Count self = adj.self[node];
  const Count kh = khat_node_[node];
  const bool dc = kind == ModelKind::degree_corrected;
  const BlockFactor bf(hp.kappa, hp.lambda);
  out.assign(L + 1, 0.0);

  for (std::size_t l = 0; l < L; ++l) {
    const auto nl = static_cast<double>(sizes_[l]);
    double delta = 0.0;
    for (std::size_t m = 0; m < L; ++m) {
      if (m == l) continue;
      const auto nm = static_cast<double>(sizes_[m]);
      const Count np = nplus(l, m);
      delta += bf(np + scratch_[m], (nl + 1.0) * nm) - bf(np, nl * nm);
    }
    const Count diag = nplus(l, l);
    delta += bf(diag + scratch_[l] + self, (nl + 1.0) * (nl + 1.0) / 2.0) - bf(diag, nl * nl / 2.0);
    if (dc) {
      delta += group_degree_factor(sizes_[l] + 1, khat_group_[l] + kh, hp.gamma) -
               group_degree_factor(sizes_[l], khat_group_[l], hp.gamma);
    }
    out[l] = delta + std::log(nl);
  }

  double fresh = bf(self, 0.5) + std::log(hp.alpha);
  for (std::size_t m = 0; m < L; ++m) fresh += bf(scratch_[m], static_cast<double>(sizes_[m]));
  if (dc) fresh += group_degree_factor(1, kh, hp.gamma);
  out[L] = fresh;
}

void BlockState::change_dyad(std::size_t i, std::size_t j, Count delta) {
  const std::size_t gi = z_[i];
  const std::size_t gj = z_[j];
  if (gi == kUnassigned || gj == kUnassigned) {
    throw std::logic_error("BlockState::change_dyad: endpoints must be assigned");
  }
  if (i == j) {
    at(gi, gi) += delta;
    khat_node_[i] += 2 * delta;
    khat_group_[gi] += 2 * delta;
    return;
  }
  at(gi, gj) += delta;
  if (gi != gj) at(gj, gi) += delta;
  khat_node_[i] += delta;
  khat_node_[j] += delta;
  khat_group_[gi] += delta;
  khat_group_[gj] += delta;
}

Partition BlockState::partition() const {
  std::vector<int> z(z_.begin(), z_.end());
  for (auto g : z_) {
    if (g == kUnassigned) throw std::logic_error("BlockState::partition: unassigned node");
  }
  return Partition::from_labels(z);
}

BlockStats BlockState::stats() const {
  const Partition part = partition();
  const std::size_t L = groups();
  std::vector<std::size_t> to_canon(L);
  for (std::size_t i = 0; i < nodes(); ++i) to_canon[z_[i]] = part[i];
  BlockStats s;
  s.sizes = part.sizes();
  s.nplus.assign(L * L, 0);
  s.khat_group.assign(L, 0);
  for (std::size_t l = 0; l < L; ++l) {
    s.khat_group[to_canon[l]] = khat_group_[l];
    for (std::size_t m = 0; m < L; ++m) s.nplus[to_canon[l] * L + to_canon[m]] = nplus(l, m);
  }
  s.khat_node = khat_node_;
  return s;
}

double BlockState::block_term(double kappa, double lambda) const {
  const BlockFactor bf(kappa, lambda);
  double acc = 0.0;
  for (std::size_t l = 0; l < groups(); ++l) {
    const auto nl = static_cast<double>(sizes_[l]);
    acc += bf(nplus(l, l), nl * nl / 2.0);
    for (std::size_t m = l + 1; m < groups(); ++m) {
      acc += bf(nplus(l, m), nl * static_cast<double>(sizes_[m]));
    }
  }
  return acc;
}

double BlockState::group_degree_term(double gamma) const {
  double acc = 0.0;
  for (std::size_t l = 0; l < groups(); ++l) {
    acc += group_degree_factor(sizes_[l], khat_group_[l], gamma);
  }
  return acc;
}

double BlockState::crp_term(double alpha) const { return log_crp_sizes(sizes_, alpha); }

// ---------------------------------------------------------------------------

std::vector<double> gibbs_conditional(std::size_t node, const Network& net, const Partition& part,
                                      const Hyperparams& hp, ModelKind kind) {
  hp.validate();
  if (part.size() != net.size()) throw std::invalid_argument("gibbs_conditional: size mismatch");
  if (node >= net.size()) throw std::out_of_range("gibbs_conditional: node index");
  const Adjacency adj = make_adjacency(net);
  BlockState state(part, adj);
  state.remove(node, adj);

  std::vector<double> weights;
  state.log_conditional(node, adj, hp, kind, weights);
  normalize_log_weights(weights);

  // Reorder to the first-appearance labels of the remaining nodes.
  const std::size_t L = state.groups();
  std::vector<std::size_t> canon(L, BlockState::kUnassigned);
  std::size_t next = 0;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (i == node) continue;
    auto& c = canon[state.group_of(i)];
    if (c == BlockState::kUnassigned) c = next++;
  }
  std::vector<double> out(L + 1);
  for (std::size_t l = 0; l < L; ++l) out[canon[l]] = weights[l];
  out[L] = weights[L];
  return out;
}

GammaLaw posterior_eta(const BlockStats& stats, std::size_t l, std::size_t m,
                       const Hyperparams& hp) {
  if (l >= stats.groups() || m >= stats.groups()) throw std::out_of_range("posterior_eta: group");
  return {static_cast<double>(stats.nplus_at(l, m)) + hp.kappa, stats.npairs(l, m) + hp.lambda};
}

DirichletLaw posterior_phi(const BlockStats& stats, const Partition& part, std::size_t l,
                           const Hyperparams& hp) {
  if (l >= stats.groups()) throw std::out_of_range("posterior_phi: group");
  DirichletLaw law;
  for (std::size_t i = 0; i < part.size(); ++i) {
    if (part[i] == l) law.concentration.push_back(hp.gamma + static_cast<double>(stats.khat_node[i]));
  }
  return law;
}

double expected_block_total(const BlockStats& stats, std::size_t l, std::size_t m,
                            const Hyperparams& hp) {
  const double np = stats.npairs(l, m);
  return np * (static_cast<double>(stats.nplus_at(l, m)) + hp.kappa) / (np + hp.lambda);
}

double expected_degree(const BlockStats& stats, std::size_t node, const Partition& part,
                       const Hyperparams& hp) {
  const std::size_t l = part[node];
  double denom = hp.gamma * static_cast<double>(stats.sizes[l]);
  for (std::size_t h = 0; h < stats.groups(); ++h) {
    denom += static_cast<double>(stats.nplus_at(l, h)) * (h == l ? 2.0 : 1.0);
  }
  double sum = 0.0;
  for (std::size_t m = 0; m < stats.groups(); ++m) {
    const double np = stats.npairs(l, m);
    sum += np * (m == l ? 2.0 : 1.0) / (np + hp.lambda) *
           (static_cast<double>(stats.nplus_at(l, m)) + hp.kappa) / denom;
  }
  return (static_cast<double>(stats.khat_node[node]) + hp.gamma) * sum;
}

}  // namespace idcsbm
