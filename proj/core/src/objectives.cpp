#include "danopt/objectives.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "danopt/errors.hpp"
#include "danopt/linalg.hpp"
#include "danopt/rng.hpp"

namespace danopt {

void ProblemConstants::validate() const {
  if (!(strong_convexity > 0))
    throw ConfigError("constants: strong convexity must be positive");
  if (!(hessian_lipschitz > 0))
    throw ConfigError("constants: Hessian Lipschitz bound must be positive "
                      "(any positive value is valid for a quadratic)");
  if (!(hessian_bound >= strong_convexity))
    throw ConfigError("constants: Hessian bound must be >= strong convexity");
  if (!(balance >= 0)) throw ConfigError("constants: balance must be >= 0");
}

SumObjective::SumObjective(
    std::vector<std::shared_ptr<const ObjectiveOracle>> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) throw ConfigError("sum objective needs at least one term");
  for (const auto& t : terms_) {
    if (!t || t->dimension() != terms_[0]->dimension())
      throw ConfigError("sum objective: dimension mismatch");
  }
}

int SumObjective::dimension() const { return terms_[0]->dimension(); }

double SumObjective::value(const Eigen::VectorXd& x) const {
  double v = 0;
  for (const auto& t : terms_) v += t->value(x);
  return v;
}

Eigen::VectorXd SumObjective::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dimension());
  for (const auto& t : terms_) g += t->gradient(x);
  return g;
}

SymmetricMatrix SumObjective::hessian(const Eigen::VectorXd& x) const {
  SymmetricMatrix h(dimension());
  for (const auto& t : terms_) h += t->hessian(x);
  return h;
}

QuadraticObjective::QuadraticObjective(SymmetricMatrix a,
                                       Eigen::VectorXd center)
    : a_(std::move(a)), b_(std::move(center)) {
  if (a_.dimension() != static_cast<int>(b_.size()))
    throw ConfigError("quadratic objective: dimension mismatch");
}

double QuadraticObjective::value(const Eigen::VectorXd& x) const {
  if (x.size() != b_.size())
    throw ConfigError("quadratic objective: point dimension mismatch");
  return 0.5 * a_.quadratic_form(x - b_);
}

Eigen::VectorXd QuadraticObjective::gradient(const Eigen::VectorXd& x) const {
  if (x.size() != b_.size())
    throw ConfigError("quadratic objective: point dimension mismatch");
  return a_.multiply(x - b_);
}

SymmetricMatrix QuadraticObjective::hessian(const Eigen::VectorXd&) const {
  return a_;
}

namespace {

// Overflow-safe log(1 + e^t) and logistic function.
double softplus(double t) {
  return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

double logistic(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

LogisticEval logistic_eval(const LogisticProblem& problem,
                           const std::vector<std::uint32_t>& subset,
                           const Eigen::VectorXd& x) {
  const int p = problem.feature_count();
  if (static_cast<int>(x.size()) != p)
    throw ConfigError("logistic_eval: point dimension mismatch");
  const double share =
      problem.ridge * double(subset.size()) / double(problem.sample_count());

  LogisticEval out;
  out.gradient = share * x;
  out.hessian = SymmetricMatrix::identity(p, share);
  for (auto row : subset) {
    if (row >= problem.sample_count())
      throw ConfigError("logistic_eval: row index out of range");
    const double t = problem.features.row(row).dot(x);
    const double sigma = logistic(t);
    out.value += softplus(t) - problem.labels[row] * t;
    out.gradient +=
        (sigma - problem.labels[row]) * problem.features.row(row).transpose();
    out.hessian.add_rank1(sigma * (1.0 - sigma),
                          problem.features.row(row).transpose());
  }
  out.value += 0.5 * share * x.squaredNorm();
  return out;
}

LogisticObjective::LogisticObjective(
    std::shared_ptr<const LogisticProblem> problem,
    std::vector<std::uint32_t> subset, double ridge_share)
    : problem_(std::move(problem)),
      subset_(std::move(subset)),
      ridge_share_(ridge_share) {
  if (!problem_) throw ConfigError("logistic objective: null problem");
  for (auto row : subset_) {
    if (row >= problem_->sample_count())
      throw ConfigError("logistic objective: row index out of range");
  }
}

int LogisticObjective::dimension() const { return problem_->feature_count(); }

double LogisticObjective::value(const Eigen::VectorXd& x) const {
  double v = 0;
  for (auto row : subset_) {
    const double t = problem_->features.row(row).dot(x);
    v += softplus(t) - problem_->labels[row] * t;
  }
  return v + 0.5 * ridge_share_ * x.squaredNorm();
}

Eigen::VectorXd LogisticObjective::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = ridge_share_ * x;
  for (auto row : subset_) {
    const double t = problem_->features.row(row).dot(x);
    g += (logistic(t) - problem_->labels[row]) *
         problem_->features.row(row).transpose();
  }
  return g;
}

SymmetricMatrix LogisticObjective::hessian(const Eigen::VectorXd& x) const {
  SymmetricMatrix h = SymmetricMatrix::identity(dimension(), ridge_share_);
  for (auto row : subset_) {
    const double sigma = logistic(problem_->features.row(row).dot(x));
    h.add_rank1(sigma * (1.0 - sigma),
                problem_->features.row(row).transpose());
  }
  return h;
}

Partition partition_dataset(std::size_t samples, std::uint32_t nodes,
                            std::uint64_t seed) {
  if (nodes == 0) throw ConfigError("partition needs at least one node");
  if (samples < nodes)
    throw ConfigError("partition: fewer samples than nodes");
  std::vector<std::uint32_t> order(samples);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(seed);
  for (std::size_t i = samples - 1; i > 0; --i) {
    const std::size_t j = rng.below(i + 1);
    std::swap(order[i], order[j]);
  }
  Partition part;
  part.blocks.resize(nodes);
  const std::size_t base = samples / nodes;
  const std::size_t extra = samples % nodes;
  std::size_t pos = 0;
  for (std::uint32_t v = 0; v < nodes; ++v) {
    const std::size_t count = base + (v < extra ? 1 : 0);
    part.blocks[v].assign(order.begin() + pos, order.begin() + pos + count);
    pos += count;
  }
  return part;
}

std::vector<std::shared_ptr<const ObjectiveOracle>> make_logistic_node_oracles(
    std::shared_ptr<const LogisticProblem> problem, const Partition& partition,
    RidgeSplit split) {
  if (!problem) throw ConfigError("null problem");
  const std::size_t m = problem->sample_count();
  const std::size_t n = partition.blocks.size();
  std::vector<std::shared_ptr<const ObjectiveOracle>> oracles;
  oracles.reserve(n);
  for (const auto& block : partition.blocks) {
    const double share = split == RidgeSplit::proportional
                             ? problem->ridge * double(block.size()) / double(m)
                             : problem->ridge / double(n);
    oracles.push_back(
        std::make_shared<LogisticObjective>(problem, block, share));
  }
  return oracles;
}

LogisticProblem make_synthetic_logistic(std::size_t samples, int features,
                                        std::uint64_t seed,
                                        double feature_scale) {
  if (samples == 0 || features <= 0)
    throw ConfigError("synthetic logistic: empty shape");
  Rng rng(seed);
  LogisticProblem problem;
  problem.features.resize(samples, features);
  problem.labels.resize(samples);
  Eigen::VectorXd truth(features);
  for (int j = 0; j < features; ++j) truth[j] = rng.normal();
  for (std::size_t i = 0; i < samples; ++i)
    for (int j = 0; j < features; ++j)
      problem.features(i, j) = rng.uniform(-feature_scale, feature_scale);
  for (std::size_t i = 0; i < samples; ++i) {
    const double prob = logistic(problem.features.row(i).dot(truth));
    problem.labels[i] = rng.uniform() < prob ? 1.0 : 0.0;
  }
  problem.ridge = 0.01 * double(samples);
  return problem;
}

namespace {

double parse_cell(const std::string& cell, std::size_t line, std::size_t col) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r'))
    --end;
  double value = 0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || begin == end)
    throw DataError("csv: bad number at line " + std::to_string(line) +
                    ", column " + std::to_string(col) + ": '" + cell + "'");
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

LogisticProblem load_csv_dataset(const std::string& path, int label_column,
                                 bool normalize, bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  if (has_header) {
    std::getline(in, line);
    ++lineno;
  }
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    const auto cells = split_csv_line(line);
    if (width == 0) {
      width = cells.size();
      if (width < 2)
        throw DataError("csv: need at least one feature and a label column");
    } else if (cells.size() != width) {
      throw DataError("csv: line " + std::to_string(lineno) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(width));
    }
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c)
      row[c] = parse_cell(cells[c], lineno, c + 1);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("csv: no data rows in " + path);

  const int cols = static_cast<int>(width);
  const int label = label_column < 0 ? cols - 1 : label_column;
  if (label >= cols)
    throw DataError("csv: label column " + std::to_string(label) +
                    " out of range, file has " + std::to_string(cols));

  LogisticProblem problem;
  const std::size_t m = rows.size();
  problem.features.resize(m, cols - 1);
  problem.labels.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    int out = 0;
    for (int c = 0; c < cols; ++c) {
      if (c == label) {
        const double y = rows[i][c];
        if (y != 0.0 && y != 1.0)
          throw DataError("csv: label at line " +
                          std::to_string(i + 1 + (has_header ? 1 : 0)) +
                          " is not 0 or 1");
        problem.labels[i] = y;
      } else {
        problem.features(i, out++) = rows[i][c];
      }
    }
  }
  if (normalize) {
    // Affine map per feature column: observed min -> -1, max -> +1.
    for (int j = 0; j < problem.features.cols(); ++j) {
      const double lo = problem.features.col(j).minCoeff();
      const double hi = problem.features.col(j).maxCoeff();
      const double half = 0.5 * (hi - lo);
      const double mid = 0.5 * (hi + lo);
      if (half > 0) {
        problem.features.col(j) =
            (problem.features.col(j).array() - mid) / half;
      } else {
        problem.features.col(j).setZero();
      }
    }
  }
  problem.ridge = 0.01 * double(m);
  return problem;
}

ProblemConstants certified_logistic_constants(const LogisticProblem& problem) {
  const int p = problem.feature_count();
  SymmetricMatrix gram(p);
  double lipschitz = 0;
  for (std::size_t i = 0; i < problem.sample_count(); ++i) {
    const Eigen::VectorXd row = problem.features.row(i).transpose();
    gram.add_rank1(1.0, row);
    lipschitz += std::pow(row.norm(), 3);
  }
  constexpr double six_sqrt3 = 10.392304845413263;  // 6 sqrt(3)
  ProblemConstants constants;
  constants.strong_convexity = problem.ridge;
  constants.hessian_lipschitz = lipschitz / six_sqrt3;
  constants.hessian_bound = problem.ridge + eigenvalue_range(gram).max / 4.0;
  return constants;
}

LogisticPreset standard_logistic_preset(std::size_t samples) {
  const double m = double(samples);
  LogisticPreset preset;
  preset.constants.strong_convexity = 0.02 * m;
  preset.constants.hessian_lipschitz = m;
  preset.constants.hessian_bound = 0.04 * m;
  preset.ridge = 0.01 * m;
  return preset;
}

QuadraticFamily synth_quadratic(std::uint32_t nodes, int dim, double mu,
                                double hessian_bound, std::uint64_t seed) {
  if (nodes == 0 || dim <= 0) throw ConfigError("quadratic family: empty shape");
  if (!(mu > 0) || !(hessian_bound >= mu))
    throw ConfigError("quadratic family: need 0 < mu <= bound");

  Rng rng(seed);
  std::vector<SymmetricMatrix> raw;
  raw.reserve(nodes);
  SymmetricMatrix raw_sum(dim);
  for (std::uint32_t v = 0; v < nodes; ++v) {
    Eigen::MatrixXd g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g(i, j) = rng.normal();
    raw.push_back(SymmetricMatrix::from_dense(g.transpose() * g));
    raw_sum += raw.back();
  }

  // Each A_v = scale * G_v'G_v + (mu/n) I is positive definite, and the sum
  // scale * sum_v G_v'G_v + mu I has top eigenvalue exactly hessian_bound
  // and bottom eigenvalue >= mu. Degenerate draws (all G near zero) fall
  // back to scaled identities with spectrum at the midpoint.
  const double top = eigenvalue_range(raw_sum).max;
  double scale = 0, shift = 0;
  if (top > 1e-12) {
    scale = (hessian_bound - mu) / top;
    shift = mu / nodes;
  } else {
    shift = 0.5 * (mu + hessian_bound) / nodes;
  }

  QuadraticFamily family;
  family.global_hessian = SymmetricMatrix(dim);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  for (std::uint32_t v = 0; v < nodes; ++v) {
    SymmetricMatrix a = raw[v];
    a *= scale;
    a.add_scaled_identity(shift);
    Eigen::VectorXd b(dim);
    for (int i = 0; i < dim; ++i) b[i] = rng.normal();
    family.global_hessian += a;
    rhs += a.multiply(b);
    family.node_oracles.push_back(
        std::make_shared<QuadraticObjective>(std::move(a), std::move(b)));
  }
  family.x_star = spd_solve(family.global_hessian, rhs);
  return family;
}

}  // namespace danopt
