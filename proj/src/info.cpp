#include "commlab/info.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

#include "commlab/error.hpp"
#include "commlab/kernels.hpp"
#include "commlab/rng.hpp"

namespace commlab {

JointDistribution::JointDistribution(DomainShape shape, std::vector<double> p)
    : shape_(std::move(shape)), p_(std::move(p)) {
  if (p_.size() != shape_.cell_count())
    throw InvalidInput("distribution has " + std::to_string(p_.size()) + " entries, domain has " +
                       std::to_string(shape_.cell_count()));
  for (std::size_t c = 0; c < p_.size(); ++c)
    if (!std::isfinite(p_[c]) || p_[c] < 0.0)
      throw InvalidInput("distribution entry " + std::to_string(c) + " is negative or not finite");
  const double total = kernels::pairwise_sum(p_);
  if (std::abs(total - 1.0) > kNormalizationTolerance)
    throw InvalidInput("distribution is not normalized (sum = " + std::to_string(total) + ")");
}

JointDistribution JointDistribution::uniform(const DomainShape& shape) {
  return JointDistribution(shape, std::vector<double>(shape.cell_count(), 1.0 / static_cast<double>(shape.cell_count())));
}

JointDistribution JointDistribution::uniform_on(const DomainShape& shape, const IndexSet& cells) {
  const std::size_t n = cells.count();
  if (n == 0) throw DegenerateInstance("uniform distribution over an empty cell set");
  std::vector<double> p(shape.cell_count(), 0.0);
  cells.for_each([&](std::size_t c) { p[c] = 1.0 / static_cast<double>(n); });
  return JointDistribution(shape, std::move(p));
}

JointDistribution JointDistribution::random(const DomainShape& shape, std::uint64_t seed,
                                            double zero_fraction) {
  Rng rng(seed);
  std::vector<double> w(shape.cell_count());
  for (auto& v : w) {
    const double u = rng.uniform();
    v = rng.coin(zero_fraction) ? 0.0 : u * u * u + 1e-6;
  }
  if (kernels::pairwise_sum(w) <= 0.0) w[rng.below(w.size())] = 1.0;
  const double total = kernels::pairwise_sum(w);
  for (auto& v : w) v /= total;
  return JointDistribution(shape, std::move(w));
}

double JointDistribution::mass(const IndexSet& cells) const {
  std::vector<double> parts;
  cells.for_each([&](std::size_t c) { parts.push_back(p_[c]); });
  return kernels::pairwise_sum(parts);
}

JointDistribution JointDistribution::restricted(const IndexSet& cells) const {
  const double m = mass(cells);
  if (!(m > 0.0)) throw DegenerateInstance("conditioning on a cell set of zero probability");
  std::vector<double> q(p_.size(), 0.0);
  cells.for_each([&](std::size_t c) { q[c] = p_[c] / m; });
  return JointDistribution(shape_, std::move(q));
}

InfoModel::InfoModel(const JointDistribution& dist, std::optional<std::vector<std::uint32_t>> transcript,
                     std::optional<std::vector<ColorId>> color)
    : arity_(dist.shape().arity()), parties_(dist.shape().arity()) {
  const auto& shape = dist.shape();
  const std::size_t cells = shape.cell_count();
  if (transcript && transcript->size() != cells) throw InvalidInput("transcript column size mismatch");
  if (color && color->size() != cells) throw InvalidInput("color column size mismatch");
  if (transcript) transcript_.emplace();
  if (color) color_.emplace();
  for (std::size_t c = 0; c < cells; ++c) {
    if (!(dist.p(c) > 0.0)) continue;
    probs_.push_back(dist.p(c));
    for (std::size_t d = 0; d < arity_; ++d) parties_[d].push_back(static_cast<std::uint32_t>(shape.coord(c, d)));
    if (transcript) transcript_->push_back((*transcript)[c]);
    if (color) color_->push_back((*color)[c]);
  }
}

VarGroup InfoModel::bob() const {
  VarGroup g;
  for (std::size_t d = 1; d < arity_; ++d) g.push_back(Var::X(d));
  return g;
}

std::uint32_t InfoModel::value(const Var& v, std::size_t row) const {
  switch (v.kind) {
    case Var::Kind::party:
      return parties_[v.party][row];
    case Var::Kind::transcript:
      return (*transcript_)[row];
    case Var::Kind::color:
      return (*color_)[row];
  }
  return 0;
}

kernels::Grouping InfoModel::grouping(const VarGroup& vars) const {
  for (const auto& v : vars) {
    if (v.kind == Var::Kind::party && v.party >= arity_)
      throw InvalidInput("variable X" + std::to_string(v.party + 1) + " does not exist");
    if (v.kind == Var::Kind::transcript && !transcript_) throw InvalidInput("no transcript variable T bound");
    if (v.kind == Var::Kind::color && !color_) throw InvalidInput("no color variable F bound");
  }
  kernels::Grouping g;
  g.ids.assign(probs_.size(), 0);
  g.groups = probs_.empty() ? 0 : 1;
  for (const auto& v : vars) {
    // Fold one variable in and re-densify, so keys never exceed 64 bits.
    std::unordered_map<std::uint64_t, std::uint32_t> dense;
    dense.reserve(g.groups * 2);
    for (std::size_t r = 0; r < probs_.size(); ++r) {
      const std::uint64_t key = (static_cast<std::uint64_t>(g.ids[r]) << 32) | value(v, r);
      auto [it, inserted] = dense.try_emplace(key, static_cast<std::uint32_t>(dense.size()));
      g.ids[r] = it->second;
    }
    g.groups = dense.size();
  }
  return g;
}

double InfoModel::entropy(const VarGroup& vars) const {
  if (vars.empty() || probs_.empty()) return 0.0;
  const auto g = grouping(vars);
  const auto masses = kernels::parallel::group_masses(g, probs_);
  return kernels::parallel::entropy_bits(masses);
}

namespace {

VarGroup join(VarGroup a, const VarGroup& b) {
  for (const auto& v : b)
    if (std::find(a.begin(), a.end(), v) == a.end()) a.push_back(v);
  return a;
}

}  // namespace

double InfoModel::conditional_entropy(const VarGroup& s, const VarGroup& given) const {
  return entropy(join(s, given)) - entropy(given);
}

double InfoModel::mutual_information(const VarGroup& a, const VarGroup& b, const VarGroup& given) const {
  return entropy(join(a, given)) + entropy(join(b, given)) - entropy(join(join(a, b), given)) -
         entropy(given);
}

double InfoModel::conditional_entropy_direct(const VarGroup& b, const VarGroup& a) const {
  if (probs_.empty()) return 0.0;
  const auto ga = grouping(a);
  const auto gab = grouping(join(a, b));
  const auto ma = kernels::serial::group_masses(ga, probs_);
  const auto mab = kernels::serial::group_masses(gab, probs_);
  std::vector<std::uint32_t> parent(gab.groups, 0);
  for (std::size_t r = 0; r < probs_.size(); ++r) parent[gab.ids[r]] = ga.ids[r];
  // Slices in group order; each slice entropy from renormalised masses.
  std::vector<std::vector<double>> slices(ga.groups);
  for (std::size_t k = 0; k < gab.groups; ++k) slices[parent[k]].push_back(mab[k] / ma[parent[k]]);
  std::vector<double> weighted(ga.groups);
  for (std::size_t j = 0; j < ga.groups; ++j) weighted[j] = ma[j] * kernels::serial::entropy_bits(slices[j]);
  return kernels::pairwise_sum(weighted);
}

InfoExpression parse_expression(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  auto fail = [&](const std::string& why) -> InvalidInput {
    return InvalidInput("bad expression '" + text + "': " + why);
  };
  if (s.size() < 4 || s[1] != '(' || s.back() != ')') throw fail("expected H(...) or I(...)");
  InfoExpression e;
  if (s[0] == 'H') e.kind = InfoExpression::Kind::entropy;
  else if (s[0] == 'I') e.kind = InfoExpression::Kind::mutual;
  else throw fail("expected H or I");
  std::string body = s.substr(2, s.size() - 3);

  auto parse_group = [&](const std::string& g) {
    VarGroup out;
    std::size_t pos = 0;
    while (pos <= g.size()) {
      auto comma = g.find(',', pos);
      std::string name = g.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (name == "X") out.push_back(Var::X(0));
      else if (name == "Y") out.push_back(Var::X(1));
      else if (name == "T") out.push_back(Var::T());
      else if (name == "F") out.push_back(Var::F());
      else if (name.size() > 1 && name[0] == 'X' &&
               std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        const auto k = std::stoul(name.substr(1));
        if (k == 0) throw fail("parties are numbered from X1");
        out.push_back(Var::X(k - 1));
      } else {
        throw fail("unknown variable '" + name + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return out;
  };

  std::string head = body;
  auto bar = body.find('|');
  if (bar != std::string::npos) {
    head = body.substr(0, bar);
    e.given = parse_group(body.substr(bar + 1));
  }
  if (e.kind == InfoExpression::Kind::entropy) {
    if (head.find(':') != std::string::npos) throw fail("':' inside H(...)");
    e.first = parse_group(head);
  } else {
    auto colon = head.find(':');
    if (colon == std::string::npos || head.find(':', colon + 1) != std::string::npos)
      throw fail("I(...) needs exactly one ':'");
    e.first = parse_group(head.substr(0, colon));
    e.second = parse_group(head.substr(colon + 1));
  }
  return e;
}

double info_quantity(const InfoModel& model, const InfoExpression& expr) {
  if (expr.kind == InfoExpression::Kind::entropy) return model.conditional_entropy(expr.first, expr.given);
  return model.mutual_information(expr.first, expr.second, expr.given);
}

double info_quantity(const InfoModel& model, const std::string& expr) {
  return info_quantity(model, parse_expression(expr));
}

double binary_entropy(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw InvalidInput("binary entropy argument must lie in [0, 1]");
  if (delta == 0.0 || delta == 1.0) return 0.0;
  return delta * std::log2(1.0 / delta) + (1.0 - delta) * std::log2(1.0 / (1.0 - delta));
}

TripleInformation triple_information(const InfoModel& model, const VarGroup& a, const VarGroup& b,
                                     const VarGroup& w) {
  TripleInformation t;
  t.value = model.mutual_information(a, b) - model.mutual_information(a, b, w);
  const double second = model.entropy(w) - model.conditional_entropy(w, a) - model.conditional_entropy(w, b) +
                        model.conditional_entropy(w, join(a, b));
  t.formula_gap = std::abs(t.value - second);
  return t;
}

namespace {

struct CoverTables {
  std::vector<std::uint32_t> per_cell;
  std::vector<std::uint32_t> per_box;
  std::vector<std::uint32_t> transcript;  // 0 on zero-probability uncovered cells
};

CoverTables cover_tables(const JointDistribution& dist, const Protocol& protocol) {
  const auto& shape = protocol.shape();
  if (!(shape == dist.shape())) throw InvalidInput("distribution and protocol have different shapes");
  const auto lists = kernels::parallel::cell_box_lists(protocol.cover());
  CoverTables t;
  t.per_cell.resize(shape.cell_count());
  t.transcript.assign(shape.cell_count(), 0);
  for (std::size_t c = 0; c < shape.cell_count(); ++c) {
    t.per_cell[c] = static_cast<std::uint32_t>(lists.offsets[c + 1] - lists.offsets[c]);
    if (t.per_cell[c] == 0) {
      if (dist.p(c) > 0.0)
        throw InvalidInput("distribution puts mass on cell " + std::to_string(c) + " outside the cover");
      continue;
    }
    t.transcript[c] = kernels::choose_box(protocol.selector(), c, lists.of(c));
  }
  t.per_box = box_thickness(protocol.cover(), t.per_cell);
  return t;
}

}  // namespace

double internal_information_cost(const JointDistribution& dist, const Protocol& protocol) {
  auto tables = cover_tables(dist, protocol);
  InfoModel m(dist, std::move(tables.transcript));
  const VarGroup t{Var::T()};
  return m.mutual_information(m.alice(), t, m.bob()) + m.mutual_information(m.bob(), t, m.alice());
}

InfoProfile build_profile(const JointDistribution& dist_in, const Protocol& protocol,
                          const ProfileOptions& options) {
  JointDistribution dist = options.restrict_to ? dist_in.restricted(*options.restrict_to) : dist_in;
  auto tables = cover_tables(dist, protocol);
  const auto& shape = protocol.shape();
  const std::size_t cells = shape.cell_count();

  InfoProfile prof;
  prof.parties = shape.arity();

  std::optional<std::vector<ColorId>> fcol;
  if (options.f_column) {
    if (options.f_column->size() != cells) throw InvalidInput("F column size mismatch");
    fcol = options.f_column;
  } else if (options.f_mode == FMode::function) {
    if (!options.target) throw InvalidInput("function mode needs a target");
    const auto* f = std::get_if<ColoredFunction>(options.target);
    if (!f) throw InvalidInput("function mode needs a function target, got a relation");
    if (!(f->shape() == shape)) throw InvalidInput("target shape does not match protocol");
    fcol = f->colors();
  } else if (options.f_mode == FMode::box_color) {
    if (!options.target) throw InvalidInput("box-color mode needs a target");
    if (!(target_shape(*options.target) == shape)) throw InvalidInput("target shape does not match protocol");
    std::vector<std::optional<ColorId>> box_color(protocol.cover().size());
    for (std::size_t b = 0; b < box_color.size(); ++b)
      box_color[b] = monochromatic_color(protocol.cover().box(b), *options.target);
    IndexSet keep(cells);
    std::vector<ColorId> col(cells, 0);
    std::vector<bool> reported(box_color.size(), false);
    for (std::size_t c = 0; c < cells; ++c) {
      if (!(dist.p(c) > 0.0)) continue;
      const auto b = tables.transcript[c];
      if (box_color[b]) {
        keep.insert(c);
        col[c] = *box_color[b];
      } else if (!reported[b]) {
        reported[b] = true;
        prof.none_color_boxes.push_back(b);
      }
    }
    std::sort(prof.none_color_boxes.begin(), prof.none_color_boxes.end());
    if (!prof.none_color_boxes.empty()) {
      prof.warning = true;
      prof.excluded_mass = 1.0 - dist.mass(keep);
      dist = dist.restricted(keep);
    }
    fcol = std::move(col);
  }

  InfoModel m(dist, tables.transcript, fcol);
  const VarGroup X = m.alice(), Y = m.bob(), T{Var::T()}, F{Var::F()};
  VarGroup all = join(X, Y);

  prof.support_size = m.support_size();
  prof.h_x = m.entropy(X);
  prof.h_y = m.entropy(Y);
  prof.h_xy = m.entropy(all);
  prof.chain_rule_gap = std::abs(prof.h_xy - prof.h_x - m.conditional_entropy_direct(Y, X));

  prof.h_t = m.entropy(T);
  for (std::size_t i = 0; i < prof.parties; ++i) prof.h_t_given_x.push_back(m.conditional_entropy(T, {Var::X(i)}));
  prof.i_xy = m.mutual_information(X, Y);
  prof.i_xy_given_t = m.mutual_information(X, Y, T);
  const auto tri = triple_information(m, X, Y, T);
  prof.i_xyt = tri.value;
  prof.triple_formula_gap = tri.formula_gap;
  prof.ic = m.mutual_information(X, T, Y) + m.mutual_information(Y, T, X);
  prof.ic_identity_gap = std::abs(prof.ic - (prof.h_t - prof.i_xyt));

  if (fcol) {
    prof.has_f = true;
    prof.h_f = m.entropy(F);
    for (std::size_t i = 0; i < prof.parties; ++i) {
      prof.h_f_given_x.push_back(m.conditional_entropy(F, {Var::X(i)}));
      prof.h_t_given_x_f.push_back(m.conditional_entropy(T, {Var::X(i), Var::F()}));
    }
    prof.h_f_given_all = m.conditional_entropy(F, all);
    prof.i_xyf = triple_information(m, X, Y, F).value;
    if (prof.h_f_given_all <= kNormalizationTolerance)
      prof.i_xyf_gap = std::abs(prof.i_xyf - (prof.h_f - m.conditional_entropy(F, X) - m.conditional_entropy(F, Y)));
  }

  prof.rho_global = 0;
  for (auto v : tables.per_cell) prof.rho_global = std::max<std::size_t>(prof.rho_global, v);
  prof.rho_box_max = 0;
  std::vector<double> weighted;
  for (std::size_t c = 0; c < cells; ++c) {
    if (!(dist.p(c) > 0.0)) continue;
    const auto r = tables.per_box[tables.transcript[c]];
    prof.rho_box_max = std::max<std::size_t>(prof.rho_box_max, r);
    weighted.push_back(dist.p(c) * std::log2(static_cast<double>(r)));
  }
  prof.expected_log_rho = kernels::pairwise_sum(weighted);
  return prof;
}

}  // namespace commlab
