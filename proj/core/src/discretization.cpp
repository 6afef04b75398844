#include "vempb/discretization.hpp"

#include "vempb/error.hpp"
#include "vempb/parallel.hpp"

#include <string>

namespace vempb {

Discretization::Discretization(PolyMesh mesh, PhysicsConfig physics, DiscretizationOptions options)
    : mesh_(std::move(mesh)), physics_(std::move(physics)), options_(options) {
  physics_.validate();
  if (options_.quadrature_degree < 0 || options_.quadrature_degree > kMaxQuadratureDegree) {
    throw ConfigError("quadrature degree must lie in [0, " + std::to_string(kMaxQuadratureDegree) + "]");
  }
  const std::size_t nc = mesh_.num_cells();
  projectors_.resize(nc);
  std::vector<Eigen::MatrixXd> local(nc);
  std::vector<char> touches_solvent(nc, 0);
  parallel_for(nc, [&](std::size_t c) {
    projectors_[c] = cell_projectors(mesh_, c);
    const QuadratureRule rule = quadrature(c);
    local[c] = local_stiffness(projectors_[c], rule, physics_, options_.stabilization);
    if (!local[c].allFinite()) throw Error("non-finite stiffness entry in cell " + std::to_string(c));
    for (auto s : rule.subdomain) touches_solvent[c] = touches_solvent[c] || s > 0;
  });
  if (physics_.kappa > 0.0) {
    for (std::size_t c = 0; c < nc; ++c)
      if (touches_solvent[c]) nonlinear_cells_.push_back(static_cast<int>(c));
  }

  std::vector<std::vector<int>> columns(mesh_.num_vertices());
  for (const auto& p : projectors_)
    for (int i : p.vertices) columns[i].insert(columns[i].end(), p.vertices.begin(), p.vertices.end());
  pattern_ = CsrMatrix::from_pattern(mesh_.num_vertices(), std::move(columns));

  positions_.resize(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& v = projectors_[c].vertices;
    auto& pos = positions_[c];
    pos.resize(v.size() * v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j)
        pos[i * v.size() + j] = static_cast<std::size_t>(pattern_.find(static_cast<std::size_t>(v[i]), v[j]));
  }

  stiffness_ = pattern_;
  scatter_matrices(local, stiffness_);
}

QuadratureRule Discretization::quadrature(std::size_t cell) const {
  QuadratureRule rule = cell_quadrature(mesh_, cell, options_.quadrature_degree);
  attach_level_set(rule, physics_.levelset);
  return rule;
}

CsrMatrix Discretization::empty_matrix() const { return pattern_; }

template <class Local>
void Discretization::scatter_matrices(const std::vector<Local>& locals, CsrMatrix& target) const {
  for (std::size_t c = 0; c < locals.size(); ++c) {
    const auto& k = locals[c];
    if (k.size() == 0) continue;
    const auto n = static_cast<std::size_t>(k.rows());
    const auto& pos = positions_[c];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        target.val[pos[i * n + j]] += k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
}

void Discretization::scatter_vectors(const std::vector<Eigen::VectorXd>& locals, Eigen::VectorXd& target) const {
  for (std::size_t c = 0; c < locals.size(); ++c) {
    const auto& v = projectors_[c].vertices;
    for (std::size_t i = 0; i < static_cast<std::size_t>(locals[c].size()); ++i)
      target[v[i]] += locals[c][static_cast<Eigen::Index>(i)];
  }
}

Eigen::VectorXd Discretization::load(const LoadSpec& spec) const {
  spec.validate();
  std::vector<Eigen::VectorXd> local(mesh_.num_cells());
  parallel_for(local.size(), [&](std::size_t c) { local[c] = local_load(projectors_[c], quadrature(c), physics_, spec); });
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_dofs()));
  scatter_vectors(local, f);
  return f;
}

Eigen::VectorXd Discretization::nonlinear_residual(const Eigen::VectorXd& u) const {
  std::vector<Eigen::VectorXd> local(mesh_.num_cells());
  parallel_for(nonlinear_cells_.size(), [&](std::size_t k) {
    const auto c = static_cast<std::size_t>(nonlinear_cells_[k]);
    local[c] = local_nonlinear_residual(projectors_[c], quadrature(c), physics_, projectors_[c].gather(u));
  });
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_dofs()));
  scatter_vectors(local, b);
  return b;
}

Eigen::VectorXd Discretization::residual(const Eigen::VectorXd& u, const Eigen::VectorXd& load) const {
  if (static_cast<std::size_t>(u.size()) != num_dofs() || load.size() != u.size()) {
    throw Error("residual: state or load has the wrong size");
  }
  Eigen::VectorXd r = stiffness_ * u + nonlinear_residual(u) - load;
  const auto& mask = dirichlet_mask();
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) r[static_cast<Eigen::Index>(i)] = 0.0;
  return r;
}

CsrMatrix Discretization::jacobian(const Eigen::VectorXd& u) const {
  std::vector<Eigen::MatrixXd> local(mesh_.num_cells());
  parallel_for(nonlinear_cells_.size(), [&](std::size_t k) {
    const auto c = static_cast<std::size_t>(nonlinear_cells_[k]);
    local[c] = local_nonlinear_jacobian(projectors_[c], quadrature(c), physics_, projectors_[c].gather(u));
  });
  CsrMatrix j = stiffness_;
  scatter_matrices(local, j);
  return j;
}

CsrMatrix assemble_linear(const Discretization& disc) { return disc.stiffness(); }

Eigen::VectorXd assemble_residual(const Discretization& disc, const LoadSpec& spec, const Eigen::VectorXd& u) {
  return disc.residual(u, disc.load(spec));
}

CsrMatrix assemble_jacobian(const Discretization& disc, const Eigen::VectorXd& u) { return disc.jacobian(u); }

}  // namespace vempb
