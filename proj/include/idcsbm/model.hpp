// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "idcsbm/graph.hpp"
#include "idcsbm/partition.hpp"

namespace idcsbm {

enum class ModelKind { degree_corrected, plain };

std::string_view to_string(ModelKind kind);
/// Accepts "dc", "degree_corrected", "plain".
ModelKind parse_model_kind(std::string_view text);

struct Hyperparams {
  double alpha = 1.0;  // CRP concentration
  double gamma = 1.0;  // Dirichlet concentration of within-group weights
  double kappa = 1.0;  // Gamma shape of block rates
  double lambda = 1.0;  // Gamma rate of block rates

  void validate() const;
  bool operator==(const Hyperparams&) const = default;
};

/// Sufficient statistics of (A, z).
struct BlockStats {
  std::vector<std::size_t> sizes;
  std::vector<Count> nplus;  // groups() x groups(), symmetric
  std::vector<Count> khat_node;
  std::vector<Count> khat_group;

  std::size_t groups() const { return sizes.size(); }
  Count nplus_at(std::size_t l, std::size_t m) const { return nplus[l * groups() + m]; }
  /// n_l n_m off the diagonal, n_l^2 / 2 on it.
  double npairs(std::size_t l, std::size_t m) const;
};

BlockStats block_stats(const Network& net, const Partition& part);

/// log p(z | alpha) under the Chinese restaurant process.
double log_crp(const Partition& part, double alpha);
double log_crp_sizes(const std::vector<std::size_t>& sizes, double alpha);

/// log [G(N+ + kappa, N + lambda) / G(kappa, lambda)], G(a, b) = b^-a Γ(a).
double block_factor(Count nplus, double npairs, double kappa, double lambda);

/// Group-level part of log [B(γ1 + k̂) / B(γ1)] n^K, i.e. everything except
/// the per-node Σ_i log Γ(γ + k̂_i) / Γ(γ), which does not depend on z.
double group_degree_factor(std::size_t size, Count khat_sum, double gamma);

/// Σ_i log Γ(γ + k̂_i) / Γ(γ).
double node_degree_factor(const std::vector<Count>& khat, double gamma);

/// -Σ_{i<=j} log A_ij! - Σ_i A_ii log 2.
double log_data_constant(const Network& net);

/// The collapsed joint log p(A, z | hp) split into its independent factors.
struct EvidenceTerms {
  double constant = 0.0;
  double block = 0.0;   // depends on kappa, lambda
  double degree = 0.0;  // depends on gamma; zero for the plain model
  double crp = 0.0;     // depends on alpha

  double total() const { return constant + block + degree + crp; }
};

double block_term(const BlockStats& stats, double kappa, double lambda);
double degree_term(const BlockStats& stats, double gamma);

EvidenceTerms evidence_terms(const Network& net, const Partition& part, const Hyperparams& hp,
                             ModelKind kind);

/// log p(A, z | alpha, gamma, kappa, lambda) with phi and eta integrated out.
/// Throws if the result is not finite.
double log_evidence(const Network& net, const Partition& part, const Hyperparams& hp,
                    ModelKind kind);

/// Mutable neighbour lists. Entries may hold zero counts so imputed dyads
/// keep stable slots.
struct Neighbor {
  std::size_t node;
  Count count;
};

struct Adjacency {
  std::vector<std::vector<Neighbor>> rows;  // off-diagonal only
  std::vector<Count> self;

  std::size_t size() const { return self.size(); }
};

Adjacency make_adjacency(const Network& net);

/// Block statistics maintained under single-node moves.
///
/// Group labels stay contiguous: removing the last member of a group moves
/// the highest-numbered group into the vacated slot. partition() returns the
/// canonical form.
class BlockState {
 public:
  static constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

  BlockState(const Partition& part, const Adjacency& adj);

  std::size_t nodes() const { return z_.size(); }
  std::size_t groups() const { return sizes_.size(); }
  std::size_t group_of(std::size_t node) const { return z_[node]; }
  std::size_t size_of(std::size_t group) const { return sizes_[group]; }
  Count nplus(std::size_t l, std::size_t m) const { return nplus_[l * cap_ + m]; }
  Count khat_group(std::size_t l) const { return khat_group_[l]; }
  const std::vector<Count>& khat_node() const { return khat_node_; }

  /// Links from `node` to each current group, self-loop excluded.
  void links_to_groups(std::size_t node, const Adjacency& adj, std::vector<Count>& out) const;

  void remove(std::size_t node, const Adjacency& adj);
  /// `group == groups()` opens a new group.
  void insert(std::size_t node, std::size_t group, const Adjacency& adj);

  /// Unnormalized log weights for placing the (removed) `node` in each
  /// group, then in a new group. Terms shared by all choices are dropped.
  void log_conditional(std::size_t node, const Adjacency& adj, const Hyperparams& hp,
                       ModelKind kind, std::vector<double>& out) const;

  /// Reflects A_ij changing by `delta` (i <= j). The caller updates `adj`.
  void change_dyad(std::size_t i, std::size_t j, Count delta);

  Partition partition() const;
  /// Canonically labelled statistics, for comparison with block_stats().
  BlockStats stats() const;

  double block_term(double kappa, double lambda) const;
  double group_degree_term(double gamma) const;
  double crp_term(double alpha) const;

 private:
  Count& at(std::size_t l, std::size_t m) { return nplus_[l * cap_ + m]; }
  void grow();
  void drop_empty(std::size_t group);

  std::vector<std::size_t> z_;
  std::vector<std::size_t> sizes_;
  std::vector<Count> khat_node_;
  std::vector<Count> khat_group_;
  std::vector<Count> nplus_;
  std::size_t cap_ = 0;
  mutable std::vector<Count> scratch_;
};

/// Conditional law of `node`'s group given everyone else. The node's own
/// entry in `part` is ignored. Entries 0..L'-1 follow the canonical labels of
/// the remaining nodes; entry L' is a new group. Sums to one.
std::vector<double> gibbs_conditional(std::size_t node, const Network& net, const Partition& part,
                                      const Hyperparams& hp, ModelKind kind);

struct GammaLaw {
  double shape;
  double rate;
  double mean() const { return shape / rate; }
};

struct DirichletLaw {
  std::vector<double> concentration;
};

GammaLaw posterior_eta(const BlockStats& stats, std::size_t l, std::size_t m,
                       const Hyperparams& hp);

/// Concentration over the members of `l` in ascending node order.
DirichletLaw posterior_phi(const BlockStats& stats, const Partition& part, std::size_t l,
                           const Hyperparams& hp);

/// E[Σ_{i<=j, z_i=l, z_j=m} A_ij] under the posterior.
double expected_block_total(const BlockStats& stats, std::size_t l, std::size_t m,
                            const Hyperparams& hp);

/// E[d_i], d_i = Σ_j A_ij + A_ii, under the posterior.
double expected_degree(const BlockStats& stats, std::size_t node, const Partition& part,
                       const Hyperparams& hp);

}  // namespace idcsbm
